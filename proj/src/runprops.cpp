#include "hopda/runprops.hpp"

#include <set>

#include "hopda/runcalc.hpp"

namespace hopda {

void PropositionReport::fail(std::string what) {
  ++violation_count;
  if (violations.size() < 10) violations.push_back(std::move(what));
}

void PropositionReport::merge(const PropositionReport& o) {
  runs += o.runs;
  subruns += o.subruns;
  checks += o.checks;
  returns_seen += o.returns_seen;
  violation_count += o.violation_count;
  for (const auto& v : o.violations)
    if (violations.size() < 10) violations.push_back(v);
}

namespace {

void collect_cells(const Stack& s, std::vector<Cell>& out) {
  if (s.order() == 0) {
    out.push_back(s.cell());
    return;
  }
  for (const Stack& item : s.items()) collect_cells(item, out);
}

StackRef hist_between(const Run& run, std::size_t i, std::size_t j, StackRef ref) {
  for (std::size_t t = j; t-- > i;) ref = hist_step(run, t, ref);
  return ref;
}

// base is a k-stack of run.at(i) whose 0-stacks carry the coordinates
// x_n..x_{k+1} of `prefix`. Checks that top^k(run.at(j)) has the same contents
// and that each of its 0-stacks has the matching 0-stack of base as history.
bool corresponds(const Run& run, std::size_t i, std::size_t j, int k, const Stack& base,
                 const Position& prefix) {
  const Stack& target = top(k, run.at(j).stack);
  if (!congruent(base, target)) return false;
  std::vector<Cell> cells;
  collect_cells(target, cells);
  for (const Cell& c : cells) {
    Position expected = c.pos;
    for (int x = k + 1; x <= expected.n; ++x) expected.set(x, prefix.get(x));
    StackRef h = hist_between(run, i, j, StackRef{0, c.pos});
    if (!(h.prefix == expected)) return false;
  }
  return true;
}

std::string where(const char* what, int k, std::size_t i, std::size_t j) {
  return std::string(what) + " fails for k=" + std::to_string(k) + " on [" + std::to_string(i) +
         ".." + std::to_string(j) + "]";
}

}  // namespace

void check_run_propositions(const Run& run, PropositionReport& report) {
  const int n = run.front().stack.order();
  const std::size_t len = run.length();
  ++report.runs;

  // up[k][i][j] and ret[k][i][j] from the direct hist-based definitions.
  std::vector<std::vector<std::vector<bool>>> up(n + 1), ret(n + 1);
  for (int k = 0; k <= n; ++k) {
    up[k].assign(len + 1, std::vector<bool>(len + 1, false));
    ret[k].assign(len + 1, std::vector<bool>(len + 1, false));
    for (std::size_t j = 0; j <= len; ++j) {
      EndpointSweep s = sweep_to(run, j, k);
      for (std::size_t i = 0; i <= j; ++i) {
        up[k][i][j] = s.upper[i];
        ret[k][i][j] = s.ret[i];
      }
    }
  }

  RecursiveRecognizer rec(run);
  for (std::size_t i = 0; i <= len; ++i)
    for (std::size_t j = i; j <= len; ++j) {
      ++report.subruns;
      const Stack& si = run.at(i).stack;
      for (int k = 0; k <= n; ++k) {
        ++report.checks;
        if (rec.upper(k, i, j) != up[k][i][j]) report.fail(where("recursive up", k, i, j));
        if (k == 0) continue;
        if (rec.ret(k, i, j) != ret[k][i][j]) report.fail(where("recursive ret", k, i, j));
        if (ret[k][i][j] && !up[k][i][j]) report.fail(where("ret within up", k, i, j));

        // Returns uncover the stack below the initial topmost one.
        if (ret[k][i][j]) {
          ++report.returns_seen;
          const Stack& tk = top(k, si);
          if (!corresponds(run, i, j, k, tk.pop_item(), top_cell(si).pos))
            report.fail(where("return shape", k, i, j));
        }

        if (up[k][i][j]) {
          bool le_all = true;
          for (std::size_t l = i; l <= j; ++l)
            if (up[k][l][j] && top(k, si).size() > top(k, run.at(l).stack).size()) le_all = false;
          if (le_all != up[k - 1][i][j]) report.fail(where("size criterion", k, i, j));
        }

        for (std::size_t m = i; m <= j; ++m)
          if (up[k - 1][i][j] && up[k][m][j] && !up[k - 1][i][m])
            report.fail(where("prefix of lower upper", k, i, j));

        if (!up[k - 1][i][j] && j > i) {
          std::size_t l = j;
          for (std::size_t t = j; t-- > i;)
            if (up[k][t][j]) {
              l = t;
              break;
            }
          if (l < j && up[k - 1][i][l] && !ret[k][i][j]) report.fail(where("return criterion", k, i, j));
        }

        const StepWitness& w = j > i ? run.witness(i) : StepWitness{};
        if (j > i && !w.is_read && w.op.kind == OpKind::Push && w.op.order == k &&
            ret[k][i + 1][j] && !corresponds(run, i, j, k, top(k, si), top_cell(si).pos))
          report.fail(where("push then return", k, i, j));
      }

      // Minimal upper runs keep the topmost k-stack unless they are one step.
      for (int k = 0; k <= n && j > i; ++k) {
        if (!up[k][i][j]) continue;
        bool minimal = true;
        for (std::size_t l = i + 1; l < j; ++l)
          if (up[k][l][j]) minimal = false;
        if (!minimal) continue;
        const StepWitness& w = run.witness(i);
        // A push may rewrite the topmost symbol, so one-step pushes of any
        // order are exempt together with pops of order at most k.
        const bool small_step =
            j == i + 1 && !w.is_read &&
            (w.op.kind == OpKind::Push || (w.op.kind == OpKind::Pop && w.op.order <= k));
        if (!small_step && !corresponds(run, i, j, k, top(k, si), top_cell(si).pos))
          report.fail(where("minimal upper shape", k, i, j));
      }
    }
}

std::vector<Configuration> reachable_configurations(const Automaton& a, std::size_t depth) {
  std::vector<Configuration> out{initial_configuration(a)};
  std::set<std::string> seen{a.state_name(out[0].state) + render_with_positions(out[0].stack)};
  std::vector<Configuration> layer = out;
  for (std::size_t d = 0; d < depth; ++d) {
    std::vector<Configuration> next;
    for (const Configuration& c : layer)
      for_each_maximal_run(a, c, 1, [&](const Run& r) {
        if (r.length() == 0) return;
        const Configuration& e = r.back();
        if (seen.insert(a.state_name(e.state) + render_with_positions(e.stack)).second) next.push_back(e);
      });
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

PropositionReport check_automaton_propositions(const Automaton& a, std::size_t max_len,
                                               std::size_t start_depth) {
  PropositionReport report;
  for (const Configuration& c : reachable_configurations(a, start_depth))
    for_each_maximal_run(a, c, max_len, [&](const Run& r) { check_run_propositions(r, report); });
  return report;
}

}  // namespace hopda
