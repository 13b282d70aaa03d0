#pragma once

#include <cstddef>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hopda/annotated.hpp"

namespace hopda {

struct DerivBudget {
  std::size_t max_card = 2;               // per assumption set
  int max_depth = 3;                      // of derivation trees
  std::size_t max_judgments = 50000;      // Error(BudgetExceeded) beyond
  std::size_t max_provider_choices = 64;  // provider combinations tried per push child
  std::size_t max_cells = 256;            // stacks handed to the realizer
  std::size_t witnesses = 3;              // trees kept per judgment
};

struct JudgmentSet {
  DerivBudget budget;
  // (symbol, descriptor) -> witness trees, shallowest first.
  std::map<std::pair<Symbol, DescId>, std::vector<TreeId>> witness;
  // True when no candidate tree was dropped by the depth or cardinality
  // bounds or the provider cap.
  bool saturated = false;
  std::size_t rounds = 0;

  bool contains(Symbol g, DescId d) const { return witness.count({g, d}) > 0; }
  std::vector<Judgment> judgments() const;
  DescSet descriptors(Symbol g) const;
};

// Fixpoint of the four tree rules over the budgeted universe. Pop targets
// range over order-n descriptors and red^k of derived descriptors.
JudgmentSet derive_judgments(TypeSystem& ts, const DerivBudget& budget);

// Realizable types of plain stacks with respect to a judgment set: every
// subset of realizable(s) is the type of some well-formed annotation of s
// built from witness trees.
class Realizer {
 public:
  Realizer(TypeSystem& ts, const JudgmentSet& j);

  const DescSet& realizable(const Plain& s);
  // A well-formed annotation of s with type exactly want; random choices are
  // drawn from rng. Throws Precondition when want is not realizable.
  AStack realize(const Plain& s, const DescSet& want, std::mt19937_64& rng);

 private:
  TypeSystem& ts_;
  const JudgmentSet& j_;
  std::map<std::string, DescSet> memo_;
};

struct ConfigurationTypes {
  DescSet types;
  DerivBudget budget;
  bool saturated = false;  // copied from the judgment set
};

// Order-0 descriptors that annotate the topmost 0-stack of some well-formed
// singular annotation of c. An under-approximation unless the judgment set is
// exhaustive for the instance.
ConfigurationTypes types_of_configuration(TypeSystem& ts, const JudgmentSet& j, const Configuration& c);

// A singular well-formed annotation of c whose topmost tree concludes sigma.
AStack annotate_configuration(TypeSystem& ts, const JudgmentSet& j, const Configuration& c, DescId sigma,
                              std::mt19937_64& rng);

}  // namespace hopda
