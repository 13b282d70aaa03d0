#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hopda/judgments.hpp"
#include "hopda/measures.hpp"
#include "hopda/runcalc.hpp"

namespace hopda {

// Random order-2 plain automata in the style of A1/A2: a handful of states, one
// or two stack symbols, input {a, b, #}, reads with injective maps and
// push/pop transitions of both orders.
struct RandomAutomatonSpec {
  int min_states = 4;
  int max_states = 7;
  int max_symbols = 2;
};
Automaton random_plain_automaton(std::mt19937_64& rng, const RandomAutomatonSpec& spec = {});

// A singular well-formed annotated 2-stack built from budgeted judgments.
struct TypedFixture {
  std::shared_ptr<TypeSystem> ts;
  JudgmentSet judgments;
  Configuration config;
  DescId sigma = 0;
  AStack start;
};

// nullopt when the drawn configuration has no budgeted type.
std::optional<TypedFixture> random_typed_fixture(std::mt19937_64& rng, const DerivBudget& budget = {},
                                                 const RandomAutomatonSpec& spec = {});

// The three inequalities relating low/high/len across every pair i <= j of an
// annotated run. high and len comparisons are skipped where a value exceeds
// the bit cap; low is always compared.
struct LemmaCheck {
  std::size_t pairs = 0;
  std::size_t high_checked = 0;
  std::size_t len_checked = 0;
  std::size_t violations = 0;
  std::string first_violation;
};
LemmaCheck check_low_high_len(TypeSystem& ts, const AnnotatedRun& r, const MeasureContext& ctx);

// Every stack of the run is singular and well-formed, the projected steps
// agree with the automaton, and the run stops exactly at an empty tree unless
// the cap was hit.
struct SuccessorCheck {
  std::size_t stacks = 0;
  std::size_t failures = 0;
  std::string first_failure;
};
SuccessorCheck check_successors(TypeSystem& ts, const AnnotatedRun& r);

// w_0 = "[", w_(k+1) = w_k^N ]^N [. Throws Precondition beyond k = 4 or N = 8.
std::string word_family(int k, int n);

struct ReplayReport {
  bool halted = false;  // the replay stopped before |R| steps
  Halt halt = Halt::None;
  std::size_t steps = 0;
  bool parallel = false;
  Run replay;
  // Budgeted types of both starts; empty for collapse automata.
  std::optional<ConfigurationTypes> types_r0;
  std::optional<ConfigurationTypes> types_c;
  nlohmann::json to_json() const;
};

// Replays the letters of R from c step by step and evaluates (k, m)-parallelism.
// Throws Precondition when R is not k-upper or c and R(0) differ in their
// positionless topmost k-stack.
ReplayReport replay_parallel_check(const Automaton& a, const Morphism& m, const Configuration& c, const Run& r,
                                   int k, const DerivBudget& budget = {});

// A bracket-star word with one insertion slot.
struct SlotWord {
  std::string before;
  std::string after;
  // "[[]]|[" marks the slot with '|'. Throws Parse without exactly one '|'.
  static SlotWord parse(std::string_view text);
  std::string fill(std::size_t stars) const;
};

struct SharpGrowthRow {
  std::size_t inserted = 0;
  std::size_t oracle_stars = 0;
  std::vector<std::size_t> accepted;  // sharp counts the U-automaton accepts
};

// For every j, runs the U-automaton on the filled word followed by 0..limit
// sharps, where limit exceeds the word length.
std::vector<SharpGrowthRow> sharp_growth_experiment(const SlotWord& w, const std::vector<std::size_t>& insertions);
nlohmann::json sharp_growth_json(const std::vector<SharpGrowthRow>& rows);

}  // namespace hopda
