#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "hopda/stack.hpp"

namespace hopda {

enum class Mode { Plain, Collapse };

struct Transition {
  bool is_read = false;
  std::map<char, int> read;  // letter -> target state
  int target = -1;           // for stack operations
  StackOp op;
};

class Automaton {
 public:
  int order = 1;
  Mode mode = Mode::Plain;
  std::vector<char> input;
  std::vector<Symbol> stack_alphabet;
  Symbol init_symbol;
  std::optional<Plain> init_stack;  // positionless start stack; default [..[init_symbol]..]
  std::vector<std::string> states;
  int init_state = 0;
  std::vector<bool> accepting;

  int add_state(const std::string& name);
  int state_index(std::string_view name) const;  // -1 when unknown
  const std::string& state_name(int q) const { return states.at(q); }
  bool has_letter(char a) const;
  bool has_symbol(Symbol s) const;
  bool collapse() const { return mode == Mode::Collapse; }

  void set(int state, Symbol symbol, Transition t);
  const Transition* delta(int state, Symbol symbol) const;
  std::vector<std::pair<std::pair<int, Symbol>, const Transition*>> transitions() const;

  // Throws Error on injectivity, mode or range violations.
  void check() const;

 private:
  static std::uint64_t key(int q, Symbol s) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(q)) << 32) | s.id();
  }
  std::unordered_map<std::uint64_t, Transition> delta_;
};

Automaton parse_automaton(std::string_view text);
Automaton load_automaton(const std::string& path);
std::string to_source(const Automaton& a);

struct Configuration {
  int state = 0;
  Stack stack;
};

bool same_stack(const Stack& a, const Stack& b);  // equality including positions
bool same_configuration(const Configuration& a, const Configuration& b);

Configuration initial_configuration(const Automaton& a);

enum class Halt { None, BlockedPop, NoTransition, LetterNotAccepted, SilentBudgetExceeded, StepCap };
const char* to_string(Halt h);

struct StepWitness {
  bool is_read = false;
  char letter = 0;
  StackOp op;
};

struct StepOutcome {
  std::optional<Configuration> next;
  Halt halt = Halt::None;
  StepWitness witness;
};

// `letter` must be supplied exactly when the transition is a read.
StepOutcome step(const Automaton& a, const Configuration& c, std::optional<char> letter);

// Whether the transition applicable at c is a read; nullopt when none exists.
std::optional<bool> is_read_configuration(const Automaton& a, const Configuration& c);

class Run {
 public:
  Run() = default;
  explicit Run(Configuration start) { configs_.push_back(std::move(start)); }

  std::size_t length() const { return steps_.size(); }
  const Configuration& at(std::size_t i) const { return configs_.at(i); }
  const Configuration& front() const { return configs_.front(); }
  const Configuration& back() const { return configs_.back(); }
  const StepWitness& witness(std::size_t i) const { return steps_.at(i); }  // step i -> i+1
  const std::vector<Configuration>& configurations() const { return configs_; }

  void append(const StepWitness& w, Configuration next);
  Run subrun(std::size_t i, std::size_t j) const;
  Run compose(const Run& next) const;  // requires back() == next.front()
  std::string word() const;
  std::size_t sharps(char sharp = '#') const;

 private:
  std::vector<Configuration> configs_;
  std::vector<StepWitness> steps_;
};

struct WordRun {
  Run run;
  bool accepted = false;
  Halt halt = Halt::None;
  std::size_t consumed = 0;
};

inline constexpr std::size_t kDefaultSilentBudget = 1'000'000;

// Feeds the word at read steps and follows silent steps. The word is accepted
// when every letter was consumed and an accepting state occurs in the silent
// extension before the next read; the run stops at that point.
WordRun run_word(const Automaton& a, std::string_view word,
                 std::size_t silent_budget = kDefaultSilentBudget);
WordRun run_word_from(const Automaton& a, const Configuration& c, std::string_view word,
                      std::size_t silent_budget = kDefaultSilentBudget);

// Calls visit on every run from c that has length max_len or cannot be
// extended, branching over the letters of each read map. Every run of length
// at most max_len from c is a prefix of a visited run.
void for_each_maximal_run(const Automaton& a, const Configuration& c, std::size_t max_len,
                          const std::function<void(const Run&)>& visit);

// Builds an automaton of order new_order (default a.order + 1) that starts with
// a push of that order, simulates a, and pops it before accepting.
Automaton order_lift(const Automaton& a, int new_order = 0);

nlohmann::json stack_json(const Stack& s);
nlohmann::json trace_json(const Automaton& a, const Run& r);

}  // namespace hopda
