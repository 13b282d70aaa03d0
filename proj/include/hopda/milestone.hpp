#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hopda/judgments.hpp"

namespace hopda {

struct StarRun {
  Run run;
  Halt halt = Halt::None;  // None when max_steps was reached
};

// The deterministic run from c that feeds the star at every read.
StarRun star_run(const Automaton& a, const Configuration& c, std::size_t max_steps, char star = '*');

struct MilestoneBudget {
  std::size_t max_steps = 400;   // length of the explored star run
  DerivBudget types{2, 3, 50000, 64, 4096, 3};
  std::size_t periods = 8;       // further periods a heuristic certificate verifies
  std::size_t max_period = 64;
  bool allow_period = true;
};

enum class CertificateKind { LoopByType, LoopByPeriod };
const char* to_string(CertificateKind k);

// R(i) and R(j) are the two ends of the witness loop on the star run R from the
// certified configuration R(0). R[0..i] and R[i..j] are 0-upper and read only
// stars.
//
// LoopByType: R(i) and R(j) have the same topmost symbol and the same budgeted
// types. Sound whenever the budgeted types are the exact types on the instance.
// LoopByPeriod: equal state and topmost symbol at i and j = i + p, and
// `periods_verified` further windows of length p are 0-upper with the same
// state and symbol at their ends. A heuristic.
struct MilestoneCertificate {
  CertificateKind kind = CertificateKind::LoopByType;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t periods_verified = 0;
  DerivBudget type_budget;
  bool types_saturated = false;
  nlohmann::json to_json() const;
};

struct CertifyResult {
  std::optional<MilestoneCertificate> certificate;  // empty means unknown
  Halt halt = Halt::None;                           // of the explored star run
  std::string reason;
};

// m must detect star-only words (Precondition otherwise). Collapse automata
// only receive period certificates.
CertifyResult certify_milestone(const Automaton& a, const Morphism& m, const Configuration& c,
                                const MilestoneBudget& budget = {});

struct SequenceReport {
  StarRun star;
  std::size_t bound = 0;
  std::vector<std::size_t> certified;              // indices <= bound, ascending
  std::vector<CertificateKind> kinds;              // parallel to certified
  std::vector<std::pair<std::size_t, std::size_t>> checked;
  std::size_t violations = 0;                      // consecutive pairs that are not 0-upper
  std::string first_violation;
  nlohmann::json to_json() const;
};

// Certifies the configurations R(0..bound) of the star run from c, using the
// next `budget.max_steps` steps as lookahead, and checks that the run between
// consecutive certified indices is 0-upper.
SequenceReport milestone_sequence_check(const Automaton& a, const Morphism& m, const Configuration& c,
                                        std::size_t bound, const MilestoneBudget& budget = {});

}  // namespace hopda
