#include "hopda/annotated.hpp"

#include <algorithm>
#include <iterator>

namespace hopda {

AStack AStack::cell(Symbol s, std::vector<TreeId> trees) {
  std::sort(trees.begin(), trees.end());
  trees.erase(std::unique(trees.begin(), trees.end()), trees.end());
  return AStack{0, s, std::move(trees), {}};
}

AStack AStack::list(int order, std::vector<AStack> items) {
  if (order < 1) throw Error(ErrorKind::OrderOutOfRange, "annotated lists have order at least 1");
  for (const AStack& it : items)
    if (it.order != order - 1) throw Error(ErrorKind::Precondition, "item order mismatch in annotated stack");
  return AStack{order, Symbol{}, {}, std::move(items)};
}

namespace {

AStack prefix(const AStack& s, std::size_t count) {
  return AStack{s.order, Symbol{}, {}, std::vector<AStack>(s.items.begin(), s.items.begin() + count)};
}

DescSet reduce_all(TypeSystem& ts, int k, const DescSet& in) {
  DescSet out;
  for (DescId d : in) out.push_back(ts.red(k, d));
  normalize(out);
  return out;
}

DescSet needed_below(TypeSystem& ts, int k, const DescSet& top) {
  DescSet out;
  for (DescId d : top) out = set_union(out, pi2(ts.ass(d, k)));
  return out;
}

DescSet minus(const DescSet& a, const DescSet& b) {
  DescSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

Plain st(const AStack& s) {
  if (s.order == 0) return Plain::cell(s.symbol);
  std::vector<Plain> items;
  items.reserve(s.items.size());
  for (const AStack& it : s.items) items.push_back(st(it));
  return Plain::list(s.order, std::move(items));
}

DescSet type_of(TypeSystem& ts, const AStack& s) {
  if (s.order == 0) {
    DescSet out;
    for (TreeId t : s.trees) out.push_back(ts.tree(t).rd);
    normalize(out);
    return out;
  }
  if (s.items.empty()) return {};
  return reduce_all(ts, s.order, type_of(ts, s.top_item()));
}

bool singular(TypeSystem& ts, const AStack& s) { return type_of(ts, s).size() == 1; }

const char* to_string(WellFormed w) {
  switch (w) {
    case WellFormed::Ok: return "ok";
    case WellFormed::SymbolMismatch: return "symbol-mismatch";
    case WellFormed::DuplicateDescriptor: return "duplicate-descriptor";
    case WellFormed::SpareProvider: return "spare-provider";
    case WellFormed::MissingProvider: return "missing-provider";
    case WellFormed::AmbiguousReduction: return "ambiguous-reduction";
  }
  return "?";
}

namespace {

WellFormedReport check_at(TypeSystem& ts, const AStack& s, const std::string& path) {
  if (s.order == 0) {
    DescSet seen;
    for (TreeId t : s.trees) {
      const Tree& tr = ts.tree(t);
      if (tr.symbol != s.symbol)
        return {WellFormed::SymbolMismatch, path + ": tree " + ts.tree_str(t) + " concludes for " + tr.symbol.name()};
      seen.push_back(tr.rd);
    }
    const std::size_t count = seen.size();
    normalize(seen);
    if (seen.size() != count) return {WellFormed::DuplicateDescriptor, path + ": two trees share a run descriptor"};
    return {};
  }
  const int k = s.order;
  DescSet below;  // type of the prefix built so far
  for (std::size_t j = 0; j < s.items.size(); ++j) {
    const std::string here = path + "/" + std::to_string(j + 1);
    WellFormedReport r = check_at(ts, s.items[j], here);
    if (!r.ok()) return r;
    const DescSet top = type_of(ts, s.items[j]);
    const DescSet need = needed_below(ts, k, top);
    if (need != below) {
      if (!subset(need, below))
        return {WellFormed::MissingProvider, here + ": the stack below lacks " + ts.str(minus(need, below).front())};
      return {WellFormed::SpareProvider, here + ": the stack below provides unused " + ts.str(minus(below, need).front())};
    }
    below = reduce_all(ts, k, top);
    if (below.size() != top.size())
      return {WellFormed::AmbiguousReduction, here + ": two descriptors reduce to the same order-" + std::to_string(k) + " descriptor"};
  }
  return {};
}

}  // namespace

WellFormedReport check_well_formed(TypeSystem& ts, const AStack& s) { return check_at(ts, s, ""); }

std::vector<AStack> decompose(const AStack& s, int l) {
  if (l < 0 || l > s.order) throw Error(ErrorKind::OrderOutOfRange, "decompose below order " + std::to_string(l));
  std::vector<AStack> parts(s.order - l + 1);
  const AStack* cur = &s;
  for (int i = s.order; i > l; --i) {
    if (cur->items.empty()) throw Error(ErrorKind::Precondition, "empty level while splitting an annotated stack");
    parts[i - l] = prefix(*cur, cur->items.size() - 1);
    cur = &cur->top_item();
  }
  parts[0] = *cur;
  return parts;
}

AStack compose_segments(const std::vector<AStack>& parts, int l) {
  if (parts.empty()) throw Error(ErrorKind::Precondition, "no segments");
  AStack cur = parts[0];
  for (std::size_t j = 1; j < parts.size(); ++j) {
    const int i = l + static_cast<int>(j);
    if (parts[j].order != i || cur.order != i - 1) throw Error(ErrorKind::Precondition, "segment orders do not chain");
    AStack next = parts[j];
    next.items.push_back(std::move(cur));
    cur = std::move(next);
  }
  return cur;
}

bool well_formed_by_segments(TypeSystem& ts, const std::vector<AStack>& parts, int l) {
  const DescSet base = type_of(ts, parts[0]);
  const int k = l + static_cast<int>(parts.size()) - 1;
  for (int i = l + 1; i <= k; ++i)
    if (type_of(ts, parts[i - l]) != needed_below(ts, i, base)) return false;
  return reduce_all(ts, k, base).size() == base.size();
}

AStack restrict_to(TypeSystem& ts, const AStack& s, const DescSet& want) {
  if (!subset(want, type_of(ts, s))) throw Error(ErrorKind::Precondition, "restriction to a set outside the type");
  if (s.order == 0) {
    std::vector<TreeId> keep;
    for (TreeId t : s.trees)
      if (std::binary_search(want.begin(), want.end(), ts.tree(t).rd)) keep.push_back(t);
    return AStack{0, s.symbol, std::move(keep), {}};
  }
  AStack out{s.order, Symbol{}, {}, std::vector<AStack>(s.items.size())};
  DescSet w = want;
  for (std::size_t j = s.items.size(); j-- > 0;) {
    DescSet phi;
    for (DescId d : type_of(ts, s.items[j]))
      if (std::binary_search(w.begin(), w.end(), ts.red(s.order, d))) phi.push_back(d);
    out.items[j] = restrict_to(ts, s.items[j], phi);
    w = needed_below(ts, s.order, phi);
  }
  return out;
}

AStack merge(TypeSystem& ts, const AStack& s, const AStack& t) {
  if (!(st(s) == st(t))) throw Error(ErrorKind::Precondition, "merge of annotated stacks with different shapes");
  const AStack tr = restrict_to(ts, t, minus(type_of(ts, t), type_of(ts, s)));
  if (s.order == 0) {
    std::vector<TreeId> trees = s.trees;
    trees.insert(trees.end(), tr.trees.begin(), tr.trees.end());
    return AStack::cell(s.symbol, std::move(trees));
  }
  if (s.items.empty()) return s;
  const std::size_t m = s.items.size();
  AStack below = merge(ts, prefix(s, m - 1), prefix(tr, m - 1));
  below.items.push_back(merge(ts, s.items.back(), tr.items.back()));
  return below;
}

Configuration conf(TypeSystem& ts, const AStack& s) {
  if (s.order != ts.n()) throw Error(ErrorKind::Precondition, "conf needs an annotated n-stack");
  const DescSet t = type_of(ts, s);
  if (t.size() != 1) throw Error(ErrorKind::Precondition, "conf needs a singular annotated stack");
  return Configuration{ts.state(t[0]), pos_plus(st(s))};
}

std::optional<AStack> successor(TypeSystem& ts, const AStack& s) {
  const int n = ts.n();
  if (s.order != n) throw Error(ErrorKind::Precondition, "successor needs an annotated n-stack");
  if (!singular(ts, s)) throw Error(ErrorKind::Precondition, "successor needs a singular annotated stack");
  WellFormedReport wf = check_well_formed(ts, s);
  if (!wf.ok()) throw Error(ErrorKind::Precondition, std::string("successor of an ill-formed stack: ") + to_string(wf.verdict));

  std::vector<AStack> parts = decompose(s, 0);
  const Tree& d = ts.tree(parts[0].trees.at(0));
  switch (d.kind) {
    case TreeKind::Empty:
      return std::nullopt;
    case TreeKind::Read:
      parts[0].trees = {d.child};
      return compose_segments(parts, 0);
    case TreeKind::Pop: {
      const int k = ts.order(d.target);
      return compose_segments(std::vector<AStack>(parts.begin() + k, parts.end()), k);
    }
    case TreeKind::Push: {
      const Composer& c = d.composer;
      const int k = c.high;
      const DescId tau = ts.tree(d.child).rd;
      std::vector<AStack> copied(k + 1);
      copied[0] = AStack::cell(d.symbol, d.providers);
      for (int i = 1; i <= k; ++i) copied[i] = restrict_to(ts, parts[i], pi2(c.at(i)));
      for (int i = 1; i < k; ++i) parts[i] = restrict_to(ts, parts[i], pi2(ts.ass(tau, i)));
      parts[k] = compose_segments(copied, 0);
      parts[0] = AStack::cell(ts.tree(d.child).symbol, {d.child});
      return compose_segments(parts, 0);
    }
  }
  return std::nullopt;
}

AnnotatedRun annotated_run(TypeSystem& ts, const AStack& s, std::size_t cap) {
  if (cap == 0) throw Error(ErrorKind::Precondition, "annotated run cap must be positive");
  AnnotatedRun out;
  out.stacks.push_back(s);
  out.run = Run(conf(ts, s));
  for (;;) {
    const AStack& cur = out.stacks.back();
    std::optional<AStack> next = successor(ts, cur);
    if (!next) break;
    if (out.run.length() == cap) {
      out.cap_exceeded = true;
      break;
    }
    const Tree& d = ts.tree(decompose(cur, 0)[0].trees.at(0));
    std::optional<char> letter;
    if (d.kind == TreeKind::Read) letter = d.letter;
    StepOutcome o = step(ts.automaton(), out.run.back(), letter);
    const Configuration expect = conf(ts, *next);
    if (!o.next) {
      out.mismatch = "the automaton halts where the annotated run continues";
    } else if (o.next->state != expect.state || !(positionless(o.next->stack) == st(*next))) {
      out.mismatch = "conf of step " + std::to_string(out.run.length() + 1) + " differs from the automaton step";
    }
    if (!out.mismatch.empty()) break;
    out.run.append(o.witness, *o.next);
    out.stacks.push_back(std::move(*next));
  }
  return out;
}

std::string render(const AStack& s, const std::map<TreeId, std::string>* names) {
  if (s.order == 0) {
    std::string out = "(" + s.symbol.name() + ",{";
    for (std::size_t i = 0; i < s.trees.size(); ++i) {
      if (i) out += ",";
      auto it = names ? names->find(s.trees[i]) : std::map<TreeId, std::string>::const_iterator{};
      out += names && it != names->end() ? it->second : "#" + std::to_string(s.trees[i]);
    }
    return out + "})";
  }
  std::string out = "[";
  for (std::size_t i = 0; i < s.items.size(); ++i) out += (i ? "," : "") + render(s.items[i], names);
  return out + "]";
}

namespace {

nlohmann::json shape_json(const AStack& s, std::map<TreeId, bool>& used) {
  if (s.order == 0) {
    for (TreeId t : s.trees) used[t] = true;
    return nlohmann::json::array({s.symbol.name(), s.trees});
  }
  nlohmann::json out = nlohmann::json::array();
  for (const AStack& it : s.items) out.push_back(shape_json(it, used));
  return out;
}

}  // namespace

nlohmann::json astack_json(const TypeSystem& ts, const AStack& s) {
  std::map<TreeId, bool> used;
  nlohmann::json out;
  out["order"] = s.order;
  out["stack"] = shape_json(s, used);
  nlohmann::json trees = nlohmann::json::object();
  for (const auto& [id, _] : used) trees[std::to_string(id)] = ts.tree_str(id);
  out["trees"] = trees;
  return out;
}

}  // namespace hopda
