#include "hopda/judgments.hpp"

#include <algorithm>

namespace hopda {

std::vector<Judgment> JudgmentSet::judgments() const {
  std::vector<Judgment> out;
  out.reserve(witness.size());
  for (const auto& [key, _] : witness) out.push_back({key.first, key.second});
  return out;
}

DescSet JudgmentSet::descriptors(Symbol g) const {
  DescSet out;
  for (auto it = witness.lower_bound({g, 0}); it != witness.end() && it->first.first == g; ++it)
    out.push_back(it->first.second);
  return out;
}

namespace {

class Deriver {
 public:
  Deriver(TypeSystem& ts, const DerivBudget& b) : ts_(ts), a_(ts.automaton()), b_(b) { out_.budget = b; }

  JudgmentSet run() {
    for (Symbol g : a_.stack_alphabet)
      for (int p = 0; p < static_cast<int>(a_.states.size()); ++p) add(ts_.empty_tree(g, p));
    for (int q = 0; q < static_cast<int>(a_.states.size()); ++q)
      for (bool f : {false, true}) top_universe_.push_back(ts_.descriptor(q, {}, f));
    bool changed = true;
    while (changed) {
      ++out_.rounds;
      changed = round();
    }
    out_.saturated = !dropped_;
    return std::move(out_);
  }

 private:
  TypeSystem& ts_;
  const Automaton& a_;
  DerivBudget b_;
  JudgmentSet out_;
  bool dropped_ = false;
  DescSet top_universe_;

  int depth_of(Symbol g, DescId d) const { return ts_.tree(out_.witness.at({g, d}).front()).depth; }

  bool fits(DescId d) {
    for (const AssumptionSet& s : ts_.get(d).ass)
      if (s.size() > b_.max_card) {
        dropped_ = true;
        return false;
      }
    return true;
  }

  // True when the tree adds a judgment or lowers its depth.
  bool add(TreeId t) {
    const Tree& tr = ts_.tree(t);
    if (!fits(tr.rd)) return false;
    auto [it, fresh] = out_.witness.try_emplace({tr.symbol, tr.rd});
    std::vector<TreeId>& w = it->second;
    if (fresh && out_.witness.size() > b_.max_judgments)
      throw Error(ErrorKind::BudgetExceeded, "more than " + std::to_string(b_.max_judgments) + " judgments");
    if (std::find(w.begin(), w.end(), t) != w.end()) return false;
    const bool shallower = fresh || tr.depth < ts_.tree(w.front()).depth;
    if (w.size() >= b_.witnesses) {
      if (tr.depth >= ts_.tree(w.back()).depth) return false;
      w.pop_back();
    }
    auto pos = std::upper_bound(w.begin(), w.end(), tr.depth,
                                [&](int d, TreeId x) { return d < ts_.tree(x).depth; });
    w.insert(pos, t);
    return shallower;
  }

  bool within_depth(int depth) {
    if (depth <= b_.max_depth) return true;
    dropped_ = true;
    return false;
  }

  bool round() {
    std::vector<std::pair<Symbol, DescId>> snap;
    for (const auto& [key, _] : out_.witness) snap.push_back(key);

    const int n = ts_.n();
    std::vector<DescSet> universe(n + 1);
    universe[n] = top_universe_;
    for (int k = 1; k < n; ++k) {
      for (const auto& [g, d] : snap) universe[k].push_back(ts_.red(k, d));
      normalize(universe[k]);
    }
    // (symbol, red^k sigma) -> sigma, built on demand per order.
    std::vector<std::map<std::pair<Symbol, DescId>, DescSet>> by_red(n + 1);
    std::vector<bool> indexed(n + 1, false);
    auto preimages = [&](int k, Symbol g, DescId xi) -> const DescSet* {
      if (!indexed[k]) {
        for (const auto& [h, d] : snap) by_red[k][{h, ts_.red(k, d)}].push_back(d);
        indexed[k] = true;
      }
      auto it = by_red[k].find({g, xi});
      return it == by_red[k].end() ? nullptr : &it->second;
    };

    bool changed = false;
    for (const auto& [key, tr] : a_.transitions()) {
      const int p = key.first;
      const Symbol g = key.second;
      if (tr->is_read) {
        for (const auto& [h, d] : snap) {
          if (h != g) continue;
          bool target = false;
          for (const auto& [letter, q] : tr->read) target = target || q == ts_.state(d);
          if (!target || !within_depth(depth_of(h, d) + 1)) continue;
          changed = add(ts_.read_tree(p, out_.witness.at({h, d}).front())) || changed;
        }
        continue;
      }
      const int k = tr->op.order;
      if (tr->op.kind == OpKind::Pop) {
        for (DescId tau : universe[k])
          if (ts_.state(tau) == tr->target) changed = add(ts_.pop_tree(g, p, tau)) || changed;
        continue;
      }
      if (tr->op.kind != OpKind::Push) continue;
      const Symbol alpha = tr->op.symbol;
      for (const auto& [h, tau] : snap) {
        if (h != alpha || ts_.state(tau) != tr->target) continue;
        const DescSet needs = pi2(ts_.ass(tau, k));
        std::vector<const DescSet*> options;
        std::size_t combos = 1;
        bool feasible = true;
        for (DescId xi : needs) {
          const DescSet* pre = preimages(k, g, xi);
          if (!pre) {
            feasible = false;
            break;
          }
          options.push_back(pre);
          combos = std::min(combos * pre->size(), b_.max_provider_choices + 1);
        }
        if (!feasible) continue;
        if (combos > b_.max_provider_choices) dropped_ = true;
        const TreeId child = out_.witness.at({h, tau}).front();
        std::vector<std::size_t> pick(options.size(), 0);
        for (std::size_t tried = 0; tried < std::min(combos, b_.max_provider_choices); ++tried) {
          std::vector<TreeId> providers;
          int depth = ts_.tree(child).depth;
          for (std::size_t i = 0; i < options.size(); ++i) {
            const DescId sigma = (*options[i])[pick[i]];
            providers.push_back(out_.witness.at({g, sigma}).front());
            depth = std::max(depth, ts_.tree(providers.back()).depth);
          }
          if (within_depth(depth + 1)) changed = add(ts_.push_tree(g, p, child, providers)) || changed;
          for (std::size_t i = 0; i < pick.size(); ++i) {
            if (++pick[i] < options[i]->size()) break;
            pick[i] = 0;
          }
        }
      }
    }
    return changed;
  }
};

Plain plain_prefix(const Plain& s) {
  return Plain::list(s.order, std::vector<Plain>(s.items.begin(), s.items.end() - 1));
}

DescSet needed(TypeSystem& ts, int k, const DescSet& top) {
  DescSet out;
  for (DescId d : top) out = set_union(out, pi2(ts.ass(d, k)));
  return out;
}

std::size_t cell_count(const Plain& s) {
  if (s.order == 0) return 1;
  std::size_t c = 0;
  for (const Plain& it : s.items) c += cell_count(it);
  return c;
}

// parts[i] is the i-stack s^i for i >= 1 and parts[0] the topmost 0-stack.
std::vector<Plain> split(const Plain& s) {
  std::vector<Plain> parts(s.order + 1);
  const Plain* cur = &s;
  for (int i = s.order; i > 0; --i) {
    if (cur->items.empty()) throw Error(ErrorKind::EmptyLevel, "configuration stack has an empty level");
    parts[i] = plain_prefix(*cur);
    cur = &cur->items.back();
  }
  parts[0] = *cur;
  return parts;
}

}  // namespace

JudgmentSet derive_judgments(TypeSystem& ts, const DerivBudget& budget) { return Deriver(ts, budget).run(); }

Realizer::Realizer(TypeSystem& ts, const JudgmentSet& j) : ts_(ts), j_(j) {}

const DescSet& Realizer::realizable(const Plain& s) {
  static const DescSet kEmpty;
  if (s.order > 0 && s.items.empty()) return kEmpty;
  const std::string key = std::to_string(s.order) + s.str();
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  DescSet out;
  if (s.order == 0) {
    out = j_.descriptors(s.symbol);
  } else {
    const DescSet below = realizable(plain_prefix(s));
    for (DescId phi : realizable(s.items.back()))
      if (subset(pi2(ts_.ass(phi, s.order)), below)) out.push_back(ts_.red(s.order, phi));
    normalize(out);
  }
  return memo_[key] = std::move(out);
}

AStack Realizer::realize(const Plain& s, const DescSet& want, std::mt19937_64& rng) {
  if (!subset(want, realizable(s))) throw Error(ErrorKind::Precondition, "type is not realizable on " + s.str());
  if (s.order == 0) {
    std::vector<TreeId> trees;
    for (DescId d : want) {
      const std::vector<TreeId>& w = j_.witness.at({s.symbol, d});
      trees.push_back(w[std::uniform_int_distribution<std::size_t>(0, w.size() - 1)(rng)]);
    }
    return AStack::cell(s.symbol, std::move(trees));
  }
  if (s.items.empty()) return AStack::list(s.order, {});
  const Plain rest = plain_prefix(s);
  const DescSet& below = realizable(rest);
  DescSet chosen;
  for (DescId xi : want) {
    DescSet cands;
    for (DescId phi : realizable(s.items.back()))
      if (ts_.red(s.order, phi) == xi && subset(pi2(ts_.ass(phi, s.order)), below)) cands.push_back(phi);
    chosen.push_back(cands[std::uniform_int_distribution<std::size_t>(0, cands.size() - 1)(rng)]);
  }
  normalize(chosen);
  AStack out = realize(rest, needed(ts_, s.order, chosen), rng);
  out.items.push_back(realize(s.items.back(), chosen, rng));
  return out;
}

ConfigurationTypes types_of_configuration(TypeSystem& ts, const JudgmentSet& j, const Configuration& c) {
  const Plain p = positionless(c.stack);
  if (cell_count(p) > j.budget.max_cells)
    throw Error(ErrorKind::BudgetExceeded, "stack has more than " + std::to_string(j.budget.max_cells) + " cells");
  const std::vector<Plain> parts = split(p);
  Realizer r(ts, j);
  ConfigurationTypes out;
  out.budget = j.budget;
  out.saturated = j.saturated;
  for (DescId sigma : r.realizable(parts[0])) {
    if (ts.state(sigma) != c.state) continue;
    bool ok = true;
    for (int i = 1; i <= ts.n() && ok; ++i) ok = subset(pi2(ts.ass(sigma, i)), r.realizable(parts[i]));
    if (ok) out.types.push_back(sigma);
  }
  return out;
}

AStack annotate_configuration(TypeSystem& ts, const JudgmentSet& j, const Configuration& c, DescId sigma,
                              std::mt19937_64& rng) {
  const Plain p = positionless(c.stack);
  const std::vector<Plain> parts = split(p);
  Realizer r(ts, j);
  if (ts.state(sigma) != c.state || !j.contains(parts[0].symbol, sigma))
    throw Error(ErrorKind::Precondition, "descriptor does not fit the topmost 0-stack");
  std::vector<AStack> segs(parts.size());
  segs[0] = r.realize(parts[0], {sigma}, rng);
  for (int i = 1; i <= ts.n(); ++i) segs[i] = r.realize(parts[i], pi2(ts.ass(sigma, i)), rng);
  return compose_segments(segs, 0);
}

}  // namespace hopda
