#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hopda/automaton.hpp"

namespace hopda {

// Counts for the executable statements about upper runs and returns, checked
// on every subrun of the given runs.
struct PropositionReport {
  std::size_t runs = 0;
  std::size_t subruns = 0;
  std::size_t checks = 0;
  std::size_t returns_seen = 0;
  std::size_t violation_count = 0;
  std::vector<std::string> violations;  // first few, for display

  void fail(std::string what);
  void merge(const PropositionReport& o);
  bool ok() const { return violation_count == 0; }
};

void check_run_propositions(const Run& run, PropositionReport& report);

// Distinct configurations reachable from the initial one in at most depth
// steps, branching over read letters.
std::vector<Configuration> reachable_configurations(const Automaton& a, std::size_t depth);

// Every run of length at most max_len starting in a configuration reachable in
// at most start_depth steps.
PropositionReport check_automaton_propositions(const Automaton& a, std::size_t max_len,
                                               std::size_t start_depth = 8);

}  // namespace hopda
