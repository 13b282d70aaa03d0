#include "hopda/runcalc.hpp"

#include <sstream>

namespace hopda {

std::string StackRef::str() const {
  std::ostringstream out;
  out << "order " << order << " at (";
  for (int j = prefix.n; j > order; --j) {
    out << prefix.get(j);
    if (j > order + 1) out << ",";
  }
  out << ")";
  return out.str();
}

namespace {

StackRef truncate(Position p, int k) {
  for (int j = 1; j <= k && j <= p.n; ++j) p.set(j, 0);
  return StackRef{k, p};
}

void check_order(const Stack& s, int k, bool returns) {
  if (k < (returns ? 1 : 0) || k > s.order())
    throw Error(ErrorKind::OrderOutOfRange, "order " + std::to_string(k) + " out of range");
}

}  // namespace

StackRef top_ref(const Stack& s, int k) {
  check_order(s, k, false);
  return truncate(top_cell(s).pos, k);
}

std::optional<StackRef> below_top_ref(const Stack& s, int k) {
  check_order(s, k, true);
  Position p = top_cell(s).pos;
  if (p.get(k) < 2) return std::nullopt;
  p.set(k, p.get(k) - 1);
  return truncate(p, k - 1);
}

StackRef enclosing_ref(const StackRef& r, int k) {
  if (k < r.order) throw Error(ErrorKind::OrderOutOfRange, "enclosing order below ref order");
  return truncate(r.prefix, k);
}

std::optional<Stack> resolve(const Stack& s, const StackRef& r) {
  if (r.prefix.n != s.order() || r.order < 0 || r.order > s.order()) return std::nullopt;
  Stack cur = s;
  for (int j = s.order(); j > r.order; --j) {
    const std::uint32_t idx = r.prefix.get(j);
    if (idx < 1 || idx > cur.size()) return std::nullopt;
    for (std::size_t skip = cur.size() - idx; skip > 0; --skip) cur = cur.pop_item();
    cur = Stack(cur.top_item());
  }
  return cur;
}

StackRef top_within(const Stack& s, const StackRef& r) {
  if (r.order < 1) throw Error(ErrorKind::OrderOutOfRange, "a 0-stack has no topmost substack");
  auto sub = resolve(s, r);
  if (!sub) throw Error(ErrorKind::UnresolvableRef, "ref " + r.str() + " does not resolve");
  StackRef out = r;
  out.order = r.order - 1;
  out.prefix.set(r.order, static_cast<std::uint32_t>(sub->size()));
  return out;
}

StackRef hist_step(const Run& run, std::size_t i, const StackRef& ref) {
  const StepWitness& w = run.witness(i);
  if (w.is_read || w.op.kind != OpKind::Push) return ref;
  const int r = w.op.order;
  if (ref.order >= r) return ref;
  const Position& top = top_cell(run.at(i + 1).stack).pos;
  for (int j = top.n; j >= r; --j)
    if (ref.prefix.get(j) != top.get(j)) return ref;
  StackRef out = ref;
  out.prefix.set(r, out.prefix.get(r) - 1);
  return out;
}

StackRef hist(const Run& run, const StackRef& ref) {
  if (!resolve(run.back().stack, ref))
    throw Error(ErrorKind::UnresolvableRef, "ref " + ref.str() + " does not resolve in the last configuration");
  StackRef cur = ref;
  for (std::size_t i = run.length(); i-- > 0;) cur = hist_step(run, i, cur);
  return cur;
}

EndpointSweep sweep_to(const Run& run, std::size_t j, int k) {
  check_order(run.at(j).stack, k, false);
  EndpointSweep out;
  out.upper.assign(j + 1, false);
  out.ret.assign(j + 1, false);

  StackRef up = top_ref(run.at(j).stack, k);
  for (std::size_t i = j + 1; i-- > 0;) {
    out.upper[i] = up == top_ref(run.at(i).stack, k);
    if (i > 0) up = hist_step(run, i - 1, up);
  }
  if (k == 0) return out;

  StackRef low = top_ref(run.at(j).stack, k - 1);
  bool lower_suffix = false;
  for (std::size_t i = j + 1; i-- > 0;) {
    const Stack& si = run.at(i).stack;
    if (i < j && low == top_ref(si, k - 1)) lower_suffix = true;
    auto below = below_top_ref(si, k);
    out.ret[i] = !lower_suffix && below && *below == low;
    if (i > 0) low = hist_step(run, i - 1, low);
  }
  return out;
}

bool is_upper(const Run& run, int k) { return sweep_to(run, run.length(), k).upper[0]; }

bool is_return(const Run& run, int k) {
  check_order(run.front().stack, k, true);
  return sweep_to(run, run.length(), k).ret[0];
}

Classification classify(const Run& run, int k) {
  check_order(run.front().stack, k, false);
  EndpointSweep s = sweep_to(run, run.length(), k);
  return Classification{k, s.upper[0], s.ret[0]};
}

RecursiveRecognizer::RecursiveRecognizer(const Run& run)
    : run_(run), n_(run.front().stack.order()), len_(run.length()) {
  const std::size_t cells = static_cast<std::size_t>(n_ + 1) * (len_ + 1) * (len_ + 1);
  up_memo_.assign(cells, -1);
  ret_memo_.assign(cells, -1);
}

std::size_t RecursiveRecognizer::slot(int k, std::size_t i, std::size_t j) const {
  return (static_cast<std::size_t>(k) * (len_ + 1) + i) * (len_ + 1) + j;
}

namespace {

// Order of the pop performed by a witness; collapse acts at order 2.
int pop_order(const StepWitness& w) {
  if (w.is_read) return 0;
  if (w.op.kind == OpKind::Pop) return w.op.order;
  if (w.op.kind == OpKind::Collapse) return 2;
  return 0;
}

int push_order(const StepWitness& w) {
  return !w.is_read && w.op.kind == OpKind::Push ? w.op.order : 0;
}

}  // namespace

bool RecursiveRecognizer::upper(int k, std::size_t i, std::size_t j) {
  if (i == j) return true;
  signed char& memo = up_memo_[slot(k, i, j)];
  if (memo >= 0) return memo;
  const StepWitness& w = run_.witness(i);
  const int push = push_order(w);
  const int pop = pop_order(w);
  bool result = false;
  if (j == i + 1) {
    result = w.is_read || push > 0 || (pop > 0 && pop <= k);
  } else {
    if (push >= k + 1 && ret(push, i + 1, j)) result = true;
    for (std::size_t m = i + 1; !result && m < j; ++m)
      result = upper(k, i, m) && upper(k, m, j);
  }
  memo = result;
  return result;
}

bool RecursiveRecognizer::ret(int r, std::size_t i, std::size_t j) {
  if (i >= j) return false;
  signed char& memo = ret_memo_[slot(r, i, j)];
  if (memo >= 0) return memo;
  const StepWitness& w = run_.witness(i);
  const int push = push_order(w);
  const int pop = pop_order(w);
  bool result = false;
  if (j == i + 1 && pop == r) result = true;
  if (!result && (w.is_read || (pop > 0 && pop < r) || (push > 0 && push != r)))
    result = ret(r, i + 1, j);
  if (!result && push >= r)
    for (std::size_t m = i + 2; !result && m < j; ++m) result = ret(push, i + 1, m) && ret(r, m, j);
  memo = result;
  return result;
}

std::vector<std::size_t> advancing_set(const Run& run, int k, std::size_t lo, std::size_t hi) {
  if (lo > hi || hi > run.length()) throw Error(ErrorKind::Precondition, "advancing_set: bad interval");
  EndpointSweep s = sweep_to(run, hi, k);
  std::vector<std::size_t> out;
  for (std::size_t i = lo; i <= hi; ++i)
    if (s.upper[i]) out.push_back(i);
  return out;
}

std::vector<std::size_t> max_upper_boundaries(const Run& run, int k) {
  std::vector<std::size_t> b = advancing_set(run, k, 0, run.length());
  if (b.front() != 0) throw Error(ErrorKind::Precondition, "run is not " + std::to_string(k) + "-upper");
  return b;
}

std::vector<Run> max_upper_decomposition(const Run& run, int k) {
  std::vector<std::size_t> b = max_upper_boundaries(run, k);
  std::vector<Run> out;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) out.push_back(run.subrun(b[i], b[i + 1]));
  return out;
}

bool parallel(int k, const Morphism& phi, const Run& r, const Run& s) {
  std::vector<std::size_t> br = max_upper_boundaries(r, k);
  std::vector<std::size_t> bs = max_upper_boundaries(s, k);
  if (br.size() != bs.size()) return false;
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    if (phi.eval(r.subrun(br[i], br[i + 1])) != phi.eval(s.subrun(bs[i], bs[i + 1]))) return false;
    if (!congruent(top(k, r.at(br[i]).stack), top(k, s.at(bs[i]).stack))) return false;
  }
  return congruent(top(k, r.back().stack), top(k, s.back().stack));
}

bool is_clear(const Run& run, std::size_t i, const StackRef& ref) {
  const Stack& si = run.at(i).stack;
  if (!resolve(si, ref)) throw Error(ErrorKind::UnresolvableRef, "ref " + ref.str() + " does not resolve");
  StackRef cur = top_within(si, ref);
  for (std::size_t t = i; t-- > 0;) cur = hist_step(run, t, cur);
  return !(cur == top_ref(run.front().stack, ref.order - 1));
}

nlohmann::json classification_table(const Run& run) {
  const int n = run.front().stack.order();
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t j = 0; j <= run.length(); ++j) {
    nlohmann::json row;
    row["j"] = j;
    row["stack"] = render(run.at(j).stack);
    for (int k = 0; k < n; ++k) {
      EndpointSweep s = sweep_to(run, j, k);
      nlohmann::json idx = nlohmann::json::array();
      for (std::size_t i = 0; i <= j; ++i)
        if (s.upper[i]) idx.push_back(i);
      row["up" + std::to_string(k)] = idx;
    }
    for (int k = 1; k <= n; ++k) {
      EndpointSweep s = sweep_to(run, j, k);
      nlohmann::json idx = nlohmann::json::array();
      for (std::size_t i = 0; i <= j; ++i)
        if (s.ret[i]) idx.push_back(i);
      row["ret" + std::to_string(k)] = idx;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace hopda
