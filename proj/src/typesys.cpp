#include "hopda/typesys.hpp"

#include <algorithm>
#include <cctype>
#include <iterator>
#include <memory>

#include "hopda/error.hpp"

namespace hopda {

void normalize(AssumptionSet& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

void normalize(DescSet& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

DescSet pi2(const AssumptionSet& s) {
  DescSet out;
  out.reserve(s.size());
  for (const Assumption& a : s) out.push_back(a.desc);
  normalize(out);
  return out;
}

bool subset(const DescSet& a, const DescSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

DescSet set_union(const DescSet& a, const DescSet& b) {
  DescSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

const char* to_string(TreeKind k) {
  switch (k) {
    case TreeKind::Empty: return "empty";
    case TreeKind::Read: return "read";
    case TreeKind::Pop: return "pop";
    case TreeKind::Push: return "push";
  }
  return "?";
}

TypeSystem::TypeSystem(Automaton a, Morphism phi, char sharp)
    : a_(std::move(a)), phi_(std::move(phi)), sharp_(sharp) {
  if (a_.collapse()) throw Error(ErrorKind::Precondition, "run descriptors are defined for automata without collapse");
}

int TypeSystem::state_of(std::string_view name) const {
  const int q = a_.state_index(name);
  if (q < 0) throw Error(ErrorKind::UnknownName, "unknown state '" + std::string(name) + "'");
  return q;
}

int TypeSystem::elem(std::string_view name) const {
  const int e = monoid().index_of(name);
  if (e < 0) throw Error(ErrorKind::UnknownName, "unknown monoid element '" + std::string(name) + "'");
  return e;
}

DescId TypeSystem::intern(Descriptor d) {
  if (d.order < 0 || d.order > n())
    throw Error(ErrorKind::OrderOutOfRange, "descriptor order " + std::to_string(d.order));
  if (d.state < 0 || d.state >= static_cast<int>(a_.states.size()))
    throw Error(ErrorKind::UnknownName, "descriptor state out of range");
  if (static_cast<int>(d.ass.size()) != n() - d.order)
    throw Error(ErrorKind::Precondition, "descriptor of order " + std::to_string(d.order) + " needs " +
                                             std::to_string(n() - d.order) + " assumption sets");
  for (std::size_t j = 0; j < d.ass.size(); ++j) {
    const int i = n() - static_cast<int>(j);
    normalize(d.ass[j]);
    for (const Assumption& x : d.ass[j]) {
      if (x.elem < 0 || x.elem >= monoid().size())
        throw Error(ErrorKind::UnknownName, "monoid element out of range");
      if (x.desc >= descs_.size() || descs_[x.desc].order != i)
        throw Error(ErrorKind::Precondition, "ass^" + std::to_string(i) + " must hold descriptors of order " +
                                                 std::to_string(i));
    }
  }
  auto it = desc_index_.find(d);
  if (it != desc_index_.end()) return it->second;
  const auto id = static_cast<DescId>(descs_.size());
  descs_.push_back(d);
  desc_index_.emplace(std::move(d), id);
  return id;
}

DescId TypeSystem::descriptor(int state, std::vector<AssumptionSet> ass_top_down, bool productive) {
  Descriptor d;
  d.order = n() - static_cast<int>(ass_top_down.size());
  d.state = state;
  d.ass = std::move(ass_top_down);
  d.productive = productive;
  return intern(std::move(d));
}

DescId TypeSystem::descriptor(std::string_view state, std::vector<AssumptionSet> ass_top_down, bool productive) {
  return descriptor(state_of(state), std::move(ass_top_down), productive);
}

const AssumptionSet& TypeSystem::ass(DescId d, int i) const {
  const Descriptor& x = get(d);
  if (i <= x.order || i > n())
    throw Error(ErrorKind::OrderOutOfRange, "ass^" + std::to_string(i) + " of a descriptor of order " +
                                                std::to_string(x.order));
  return x.ass[n() - i];
}

DescId TypeSystem::red(int k, DescId d) {
  const int l = order(d);
  if (k < l || k > n()) throw Error(ErrorKind::OrderOutOfRange, "red^" + std::to_string(k) + " of order " + std::to_string(l));
  if (k == l) return d;
  auto memo = red_memo_.find({k, d});
  if (memo != red_memo_.end()) return memo->second;
  const Descriptor src = get(d);
  Descriptor out;
  out.order = k;
  out.state = src.state;
  out.ass.assign(src.ass.begin(), src.ass.begin() + (n() - k));
  out.productive = src.productive;
  for (int i = l + 1; i <= k && !out.productive; ++i)
    for (const Assumption& x : src.ass[n() - i])
      if (productive(x.desc)) out.productive = true;
  const DescId r = intern(std::move(out));
  red_memo_[{k, d}] = r;
  return r;
}

AssumptionSet TypeSystem::compose_left(int m, const AssumptionSet& s) const {
  AssumptionSet out;
  out.reserve(s.size());
  for (const Assumption& x : s) out.push_back({monoid().mul(m, x.elem), x.desc});
  normalize(out);
  return out;
}

Composer composer_from_base(TypeSystem& ts, const AssumptionSet& base, int l, int k) {
  if (l < 0 || l > k || k > ts.n())
    throw Error(ErrorKind::Precondition, "composer orders l=" + std::to_string(l) + ", k=" + std::to_string(k));
  Composer c;
  c.low = l;
  c.high = k;
  c.phi.assign(k - l + 1, {});
  c.phi[0] = base;
  normalize(c.phi[0]);
  for (const Assumption& x : c.phi[0])
    if (ts.order(x.desc) != l) throw Error(ErrorKind::Precondition, "composer base mixes orders");
  for (int i = l + 1; i <= k; ++i) {
    AssumptionSet& phi = c.phi[i - l];
    for (const Assumption& x : c.phi[0]) {
      AssumptionSet part = ts.compose_left(x.elem, ts.ass(x.desc, i));
      phi.insert(phi.end(), part.begin(), part.end());
    }
    normalize(phi);
  }
  for (const Assumption& x : c.phi[0]) c.psi.push_back({x.elem, ts.red(k, x.desc)});
  normalize(c.psi);

  const DescSet base_descs = pi2(c.phi[0]);
  if (pi2(c.psi).size() != base_descs.size())
    throw Error(ErrorKind::NotComposer, "two base descriptors reduce to the same descriptor");

  for (int i = l + 1; i <= k && !c.productive; ++i)
    for (std::size_t a = 0; a < base_descs.size() && !c.productive; ++a) {
      const DescSet sa = pi2(ts.ass(base_descs[a], i));
      for (std::size_t b = a + 1; b < base_descs.size() && !c.productive; ++b) {
        const DescSet sb = pi2(ts.ass(base_descs[b], i));
        DescSet shared;
        std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(shared));
        for (DescId x : shared)
          if (ts.productive(x)) c.productive = true;
      }
    }
  return c;
}

std::optional<std::string> composer_violation(TypeSystem& ts, const Composer& c) {
  if (c.low < 0 || c.low > c.high || c.high > ts.n() || static_cast<int>(c.phi.size()) != c.high - c.low + 1)
    return "malformed tuple";
  for (int i = c.low; i <= c.high; ++i)
    for (const Assumption& x : c.at(i))
      if (ts.order(x.desc) != i) return "Phi^" + std::to_string(i) + " holds a descriptor of the wrong order";
  Composer expected;
  try {
    expected = composer_from_base(ts, c.at(c.low), c.low, c.high);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotComposer) {
      // C1 and C2 are still reported first when they fail.
      for (int i = c.low + 1; i <= c.high; ++i) {
        AssumptionSet phi;
        for (const Assumption& x : c.at(c.low)) {
          AssumptionSet part = ts.compose_left(x.elem, ts.ass(x.desc, i));
          phi.insert(phi.end(), part.begin(), part.end());
        }
        normalize(phi);
        if (phi != c.at(i)) return "C1 fails at order " + std::to_string(i);
      }
      return "C3 fails: two base descriptors reduce to the same descriptor";
    }
    throw;
  }
  for (int i = c.low + 1; i <= c.high; ++i)
    if (expected.at(i) != c.at(i)) return "C1 fails at order " + std::to_string(i);
  if (expected.psi != c.psi) return "C2 fails";
  if (expected.productive != c.productive) return "C4 fails";
  return std::nullopt;
}

TreeId TypeSystem::store(Tree t, TreeKey key) {
  auto it = tree_index_.find(key);
  if (it != tree_index_.end()) return it->second;
  const auto id = static_cast<TreeId>(trees_.size());
  trees_.push_back(std::move(t));
  tree_index_.emplace(std::move(key), id);
  return id;
}

namespace {

[[noreturn]] void mismatch(const std::string& what) { throw Error(ErrorKind::RuleMismatch, what); }

}  // namespace

TreeId TypeSystem::empty_tree(Symbol g, int p) {
  if (!a_.has_symbol(g)) throw Error(ErrorKind::UnknownName, "unknown stack symbol '" + g.name() + "'");
  if (p < 0 || p >= static_cast<int>(a_.states.size())) throw Error(ErrorKind::UnknownName, "state out of range");
  Tree t;
  t.kind = TreeKind::Empty;
  t.symbol = g;
  t.state = p;
  t.rd = descriptor(p, std::vector<AssumptionSet>(n()), false);
  return store(std::move(t), {0, g.id(), p, 0, 0, {}});
}

TreeId TypeSystem::read_tree(int p, TreeId child) {
  const Tree c = tree(child);
  const Transition* tr = a_.delta(p, c.symbol);
  if (!tr || !tr->is_read) mismatch("read tree at " + a_.state_name(p) + " without a read transition");
  char letter = 0;
  bool found = false;
  for (const auto& [a, q] : tr->read)
    if (q == state(c.rd)) {
      letter = a;
      found = true;
    }
  if (!found) mismatch("read tree: state " + a_.state_name(state(c.rd)) + " is not a target of the read map");
  std::vector<AssumptionSet> ass;
  const int m = phi_.letter(letter);
  for (int i = n(); i >= 1; --i) ass.push_back(compose_left(m, this->ass(c.rd, i)));
  Tree t;
  t.kind = TreeKind::Read;
  t.symbol = c.symbol;
  t.state = p;
  t.letter = letter;
  t.child = child;
  t.depth = 1 + c.depth;
  t.rd = descriptor(p, std::move(ass), productive(c.rd) || letter == sharp_);
  return store(std::move(t), {1, c.symbol.id(), p, child, 0, {}});
}

TreeId TypeSystem::pop_tree(Symbol g, int p, DescId target) {
  const Transition* tr = a_.delta(p, g);
  if (!tr || tr->is_read || tr->op.kind != OpKind::Pop)
    mismatch("pop tree at (" + a_.state_name(p) + ", " + g.name() + ") without a pop transition");
  const int k = tr->op.order;
  if (order(target) != k) mismatch("pop tree: the descriptor has order " + std::to_string(order(target)) +
                                   " but the transition pops order " + std::to_string(k));
  if (state(target) != tr->target) mismatch("pop tree: descriptor state differs from the transition target");
  std::vector<AssumptionSet> ass;
  for (int i = n(); i > k; --i) ass.push_back(this->ass(target, i));
  ass.push_back({{monoid().identity(), target}});
  for (int i = k - 1; i >= 1; --i) ass.emplace_back();
  Tree t;
  t.kind = TreeKind::Pop;
  t.symbol = g;
  t.state = p;
  t.target = target;
  t.rd = descriptor(p, std::move(ass), false);
  return store(std::move(t), {2, g.id(), p, 0, target, {}});
}

TreeId TypeSystem::push_tree(Symbol g, int p, TreeId child, std::vector<TreeId> providers) {
  const Transition* tr = a_.delta(p, g);
  if (!tr || tr->is_read || tr->op.kind != OpKind::Push)
    mismatch("push tree at (" + a_.state_name(p) + ", " + g.name() + ") without a push transition");
  const int k = tr->op.order;
  const Tree c = tree(child);
  if (c.symbol != tr->op.symbol) mismatch("push tree: the child concludes for " + c.symbol.name() + ", not " + tr->op.symbol.name());
  if (state(c.rd) != tr->target) mismatch("push tree: child state differs from the transition target");
  std::sort(providers.begin(), providers.end());
  providers.erase(std::unique(providers.begin(), providers.end()), providers.end());

  DescSet provided;
  int depth = c.depth;
  for (TreeId e : providers) {
    const Tree& pt = tree(e);
    if (pt.symbol != g) mismatch("push tree: a provider concludes for " + pt.symbol.name() + ", not " + g.name());
    provided.push_back(pt.rd);
    depth = std::max(depth, pt.depth);
  }
  const std::size_t count = provided.size();
  normalize(provided);
  if (provided.size() != count) mismatch("push tree: two providers share a run descriptor");

  const DescId tau = c.rd;
  const AssumptionSet& psi_k = ass(tau, k);
  AssumptionSet base;
  for (DescId s : provided) {
    const DescId r = red(k, s);
    bool used = false;
    for (const Assumption& x : psi_k)
      if (x.desc == r) {
        base.push_back({x.elem, s});
        used = true;
      }
    if (!used) mismatch("push tree: provider " + str(s) + " is not required by the pushed 0-stack");
  }
  Composer comp = composer_from_base(*this, base, 0, k);
  if (comp.psi != psi_k) mismatch("push tree: an order-" + std::to_string(k) + " assumption has no provider");

  std::vector<AssumptionSet> ups;
  bool prod = comp.productive || productive(tau);
  for (DescId s : provided) prod = prod || productive(s);
  for (int i = n(); i >= 1; --i) {
    if (i > k) {
      ups.push_back(ass(tau, i));
    } else if (i == k) {
      ups.push_back(comp.at(k));
    } else {
      AssumptionSet u = ass(tau, i);
      const AssumptionSet& f = comp.at(i);
      u.insert(u.end(), f.begin(), f.end());
      normalize(u);
      ups.push_back(std::move(u));
      const DescSet a = pi2(ass(tau, i));
      const DescSet b = pi2(f);
      DescSet shared;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(shared));
      for (DescId x : shared) prod = prod || productive(x);
    }
  }
  Tree t;
  t.kind = TreeKind::Push;
  t.symbol = g;
  t.state = p;
  t.child = child;
  t.providers = providers;
  t.depth = 1 + depth;
  t.composer = std::move(comp);
  t.rd = descriptor(p, std::move(ups), prod);
  return store(std::move(t), {3, g.id(), p, child, 0, std::move(providers)});
}

std::string TypeSystem::str(const AssumptionSet& s) const {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += " ";
    out += "(" + monoid().name(s[i].elem) + " " + str(s[i].desc) + ")";
  }
  return out + ")";
}

std::string TypeSystem::str(DescId d) const {
  const Descriptor& x = get(d);
  std::string out = "(" + a_.state_name(x.state);
  for (const AssumptionSet& s : x.ass) out += " " + str(s);
  return out + (x.productive ? " pr)" : " np)");
}

std::string TypeSystem::tree_str(TreeId id) const {
  const Tree& t = tree(id);
  switch (t.kind) {
    case TreeKind::Empty:
      return "(empty " + t.symbol.name() + " " + a_.state_name(t.state) + ")";
    case TreeKind::Read:
      return "(read " + a_.state_name(t.state) + " " + tree_str(t.child) + ")";
    case TreeKind::Pop:
      return "(pop " + t.symbol.name() + " " + a_.state_name(t.state) + " " + str(t.target) + ")";
    case TreeKind::Push: {
      std::string out = "(push " + t.symbol.name() + " " + a_.state_name(t.state) + " " + tree_str(t.child) + " (";
      for (std::size_t i = 0; i < t.providers.size(); ++i) out += (i ? " " : "") + tree_str(t.providers[i]);
      return out + "))";
    }
  }
  return "";
}

namespace {

struct Sexp {
  std::string atom;
  std::vector<Sexp> list;
  bool is_atom = false;
};

class SexpReader {
 public:
  explicit SexpReader(std::string_view text) : s_(text) {}

  Sexp read_all() {
    Sexp v = read();
    skip();
    if (i_ != s_.size()) fail("trailing input");
    return v;
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::Parse, "s-expression at offset " + std::to_string(i_) + ": " + what);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  Sexp read() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end");
    Sexp v;
    if (s_[i_] == '(') {
      ++i_;
      for (;;) {
        skip();
        if (i_ >= s_.size()) fail("missing ')'");
        if (s_[i_] == ')') {
          ++i_;
          return v;
        }
        v.list.push_back(read());
      }
    }
    if (s_[i_] == ')') fail("unexpected ')'");
    v.is_atom = true;
    while (i_ < s_.size() && s_[i_] != '(' && s_[i_] != ')' && !std::isspace(static_cast<unsigned char>(s_[i_])))
      v.atom += s_[i_++];
    return v;
  }
};

[[noreturn]] void shape(const std::string& what) { throw Error(ErrorKind::Parse, what); }

const std::string& atom(const Sexp& v, const char* what) {
  if (!v.is_atom) shape(std::string("expected ") + what);
  return v.atom;
}

DescId build_descriptor(TypeSystem& ts, const Sexp& v) {
  if (v.is_atom || v.list.size() < 2) shape("a descriptor is (state sets... flag)");
  const std::string& flag = atom(v.list.back(), "flag");
  if (flag != "np" && flag != "pr") shape("flag must be np or pr");
  std::vector<AssumptionSet> sets;
  for (std::size_t j = 1; j + 1 < v.list.size(); ++j) {
    const Sexp& set = v.list[j];
    if (set.is_atom) shape("expected an assumption set");
    AssumptionSet out;
    for (const Sexp& pair : set.list) {
      if (pair.is_atom || pair.list.size() != 2) shape("an assumption is (element descriptor)");
      out.push_back({ts.elem(atom(pair.list[0], "monoid element")), build_descriptor(ts, pair.list[1])});
    }
    sets.push_back(std::move(out));
  }
  if (static_cast<int>(sets.size()) > ts.n()) shape("too many assumption sets");
  return ts.descriptor(atom(v.list[0], "state"), std::move(sets), flag == "pr");
}

int state_arg(TypeSystem& ts, const Sexp& v) {
  const int q = ts.automaton().state_index(atom(v, "state"));
  if (q < 0) throw Error(ErrorKind::UnknownName, "unknown state '" + v.atom + "'");
  return q;
}

Symbol symbol_arg(const Sexp& v) { return Symbol::intern(atom(v, "stack symbol")); }

TreeId build_tree(TypeSystem& ts, const Sexp& v) {
  if (v.is_atom || v.list.empty()) shape("a tree is a list");
  const std::string& kind = atom(v.list[0], "tree kind");
  auto need = [&](std::size_t n) {
    if (v.list.size() != n) shape("(" + kind + " ...) takes " + std::to_string(n - 1) + " arguments");
  };
  if (kind == "empty") {
    need(3);
    return ts.empty_tree(symbol_arg(v.list[1]), state_arg(ts, v.list[2]));
  }
  if (kind == "read") {
    need(3);
    return ts.read_tree(state_arg(ts, v.list[1]), build_tree(ts, v.list[2]));
  }
  if (kind == "pop") {
    need(4);
    return ts.pop_tree(symbol_arg(v.list[1]), state_arg(ts, v.list[2]), build_descriptor(ts, v.list[3]));
  }
  if (kind == "push") {
    need(5);
    if (v.list[4].is_atom) shape("push providers must be a list");
    std::vector<TreeId> providers;
    for (const Sexp& e : v.list[4].list) providers.push_back(build_tree(ts, e));
    const std::size_t given = providers.size();
    std::sort(providers.begin(), providers.end());
    if (std::unique(providers.begin(), providers.end()) != providers.end() || providers.size() != given)
      throw Error(ErrorKind::RuleMismatch, "push tree: a provider is listed twice");
    return ts.push_tree(symbol_arg(v.list[1]), state_arg(ts, v.list[2]), build_tree(ts, v.list[3]),
                        std::move(providers));
  }
  shape("unknown tree kind '" + kind + "'");
}

}  // namespace

DescId TypeSystem::parse_descriptor(std::string_view text) { return build_descriptor(*this, SexpReader(text).read_all()); }

TreeId TypeSystem::parse_tree(std::string_view text) { return build_tree(*this, SexpReader(text).read_all()); }

Judgment check_tree(TypeSystem& ts, std::string_view text) {
  const TreeId t = ts.parse_tree(text);
  return {ts.tree(t).symbol, ts.tree(t).rd};
}

}  // namespace hopda
