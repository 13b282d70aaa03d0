#pragma once

#include <compare>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "hopda/automaton.hpp"
#include "hopda/monoid.hpp"

namespace hopda {

using DescId = std::uint32_t;
using TreeId = std::uint32_t;

// A pair (m, xi) of an assumption set.
struct Assumption {
  int elem = 0;
  DescId desc = 0;
  auto operator<=>(const Assumption&) const = default;
};

using AssumptionSet = std::vector<Assumption>;  // sorted, duplicate free
using DescSet = std::vector<DescId>;            // sorted, duplicate free

void normalize(AssumptionSet& s);
void normalize(DescSet& s);
DescSet pi2(const AssumptionSet& s);
bool subset(const DescSet& a, const DescSet& b);
DescSet set_union(const DescSet& a, const DescSet& b);

// A run descriptor of order k: a state, the assumption sets ass^n, ..., ass^(k+1)
// and a productivity flag. ass[j] holds ass^(n - j).
struct Descriptor {
  int order = 0;
  int state = 0;
  std::vector<AssumptionSet> ass;
  bool productive = false;
  auto operator<=>(const Descriptor&) const = default;
};

// (Phi^k, ..., Phi^l; Psi^k; f). phi[i - low] holds Phi^i.
struct Composer {
  int low = 0;
  int high = 0;
  std::vector<AssumptionSet> phi;
  AssumptionSet psi;
  bool productive = false;
  bool operator==(const Composer&) const = default;

  const AssumptionSet& at(int i) const { return phi.at(i - low); }
};

enum class TreeKind { Empty, Read, Pop, Push };
const char* to_string(TreeKind k);

struct Tree {
  TreeKind kind = TreeKind::Empty;
  Symbol symbol;
  int state = 0;
  DescId rd = 0;
  int depth = 0;
  char letter = 0;               // read: the letter whose target is the child's state
  TreeId child = 0;              // read, push
  DescId target = 0;             // pop: the descriptor of the uncovered stack
  std::vector<TreeId> providers; // push: trees for the copied 0-stack, sorted
  Composer composer;             // push: composer splitting ass^k of the child
};

// Hash-consing store for descriptors and validated derivation trees of one
// automaton and morphism. Not thread-safe; confine each instance to a thread.
class TypeSystem {
 public:
  // Throws Error(Precondition) for collapse automata.
  TypeSystem(Automaton a, Morphism phi, char sharp = '#');

  const Automaton& automaton() const { return a_; }
  const Morphism& morphism() const { return phi_; }
  const Monoid& monoid() const { return phi_.monoid(); }
  int n() const { return a_.order; }
  char sharp() const { return sharp_; }

  // Sorts the assumption sets and checks orders, states and monoid elements.
  DescId intern(Descriptor d);
  // ass_top_down lists ass^n first; its length fixes the order.
  DescId descriptor(int state, std::vector<AssumptionSet> ass_top_down, bool productive);
  DescId descriptor(std::string_view state, std::vector<AssumptionSet> ass_top_down, bool productive);

  const Descriptor& get(DescId d) const { return descs_.at(d); }
  int order(DescId d) const { return get(d).order; }
  int state(DescId d) const { return get(d).state; }
  bool productive(DescId d) const { return get(d).productive; }
  // ass^i(d) for order(d) < i <= n.
  const AssumptionSet& ass(DescId d, int i) const;
  std::size_t descriptor_count() const { return descs_.size(); }

  // red^k(d) for order(d) <= k <= n; Error(OrderOutOfRange) otherwise.
  DescId red(int k, DescId d);

  AssumptionSet compose_left(int m, const AssumptionSet& s) const;  // m o s
  int elem(std::string_view name) const;

  TreeId empty_tree(Symbol g, int p);
  TreeId read_tree(int p, TreeId child);
  TreeId pop_tree(Symbol g, int p, DescId target);
  TreeId push_tree(Symbol g, int p, TreeId child, std::vector<TreeId> providers);
  const Tree& tree(TreeId t) const { return trees_.at(t); }
  std::size_t tree_count() const { return trees_.size(); }

  std::string str(DescId d) const;
  std::string str(const AssumptionSet& s) const;
  std::string tree_str(TreeId t) const;
  DescId parse_descriptor(std::string_view text);
  TreeId parse_tree(std::string_view text);

 private:
  Automaton a_;
  Morphism phi_;
  char sharp_;
  std::deque<Descriptor> descs_;
  std::map<Descriptor, DescId> desc_index_;
  std::deque<Tree> trees_;
  using TreeKey = std::tuple<int, std::uint32_t, int, TreeId, DescId, std::vector<TreeId>>;
  std::map<TreeKey, TreeId> tree_index_;
  std::map<std::pair<int, DescId>, DescId> red_memo_;

  TreeId store(Tree t, TreeKey key);
  int state_of(std::string_view name) const;
};

// Phi^(l+1..k) by C1, Psi^k by C2 and f by C4 from the base Phi^l.
// Throws Error(NotComposer) when C3 fails and Error(Precondition) when the base
// mixes orders or l > k.
Composer composer_from_base(TypeSystem& ts, const AssumptionSet& base, int l, int k);
// nullopt when c satisfies C1-C4, else the first failing condition.
std::optional<std::string> composer_violation(TypeSystem& ts, const Composer& c);
inline bool is_composer(TypeSystem& ts, const Composer& c) { return !composer_violation(ts, c); }

struct Judgment {
  Symbol symbol;
  DescId rd = 0;
  bool operator==(const Judgment&) const = default;
};

// Parses and validates a derivation tree; returns its conclusion.
// Throws Error(Parse), Error(RuleMismatch) or Error(NotComposer).
Judgment check_tree(TypeSystem& ts, std::string_view text);

}  // namespace hopda
