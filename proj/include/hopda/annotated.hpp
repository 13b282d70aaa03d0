#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hopda/automaton.hpp"
#include "hopda/typesys.hpp"

namespace hopda {

// Positionless stack whose 0-stacks carry a symbol and a set of derivation
// trees (sorted ids). Items run bottom to top.
struct AStack {
  int order = 0;
  Symbol symbol;
  std::vector<TreeId> trees;
  std::vector<AStack> items;

  static AStack cell(Symbol s, std::vector<TreeId> trees);
  static AStack list(int order, std::vector<AStack> items);

  bool empty() const { return order > 0 && items.empty(); }
  const AStack& top_item() const { return items.back(); }
  bool operator==(const AStack&) const = default;
};

Plain st(const AStack& s);
DescSet type_of(TypeSystem& ts, const AStack& s);
bool singular(TypeSystem& ts, const AStack& s);

enum class WellFormed { Ok, SymbolMismatch, DuplicateDescriptor, SpareProvider, MissingProvider, AmbiguousReduction };
const char* to_string(WellFormed w);

struct WellFormedReport {
  WellFormed verdict = WellFormed::Ok;
  std::string detail;  // where the first failure sits
  bool ok() const { return verdict == WellFormed::Ok; }
};

WellFormedReport check_well_formed(TypeSystem& ts, const AStack& s);
inline bool well_formed(TypeSystem& ts, const AStack& s) { return check_well_formed(ts, s).ok(); }

// s = s^k : s^(k-1) : ... : s^l. parts[i - l] is the i-stack s^i; the
// (l-1)-stack below s^l is never split off. Throws Precondition when a level
// above l is empty.
std::vector<AStack> decompose(const AStack& s, int l);
AStack compose_segments(const std::vector<AStack>& parts, int l);

// The multi-segment criterion: type(s^i) is the union of pi2(ass^i) over
// type(s^l) for every i > l, and red^k is injective on type(s^l). Every part
// must already be well-formed.
bool well_formed_by_segments(TypeSystem& ts, const std::vector<AStack>& parts, int l);

// Throws Precondition when want is not a subset of type_of(s).
AStack restrict_to(TypeSystem& ts, const AStack& s, const DescSet& want);
// Both well-formed with equal st(). The result has type type(s) u type(t).
AStack merge(TypeSystem& ts, const AStack& s, const AStack& t);

// conf(s) for a singular well-formed n-stack; Precondition otherwise.
Configuration conf(TypeSystem& ts, const AStack& s);

// nullopt exactly when the topmost tree is an empty tree.
std::optional<AStack> successor(TypeSystem& ts, const AStack& s);

struct AnnotatedRun {
  std::vector<AStack> stacks;
  Run run;                   // st of the annotated run, from pos_plus of the first stack
  bool cap_exceeded = false;
  std::string mismatch;      // nonempty when a conf step disagrees with the automaton
  std::size_t sharps(char sharp) const { return run.sharps(sharp); }
};

// Follows successor until none exists or cap steps were taken. The projected
// run is produced by automaton steps, so positions follow the real history.
AnnotatedRun annotated_run(TypeSystem& ts, const AStack& s, std::size_t cap);

// "[[(g,{E4}),(g,{E3})],[(g,{}),(g,{D1})]]"; trees print by name when one is
// given, else as #id.
std::string render(const AStack& s, const std::map<TreeId, std::string>* names = nullptr);

// {"stack": nested [symbol, [ids]] arrays, "trees": {id: s-expression}}.
nlohmann::json astack_json(const TypeSystem& ts, const AStack& s);

}  // namespace hopda
