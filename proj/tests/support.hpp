#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "hopda/judgments.hpp"

namespace support {

// pow evaluated straight from its definition, independent of pow_tower.
// nullopt once an intermediate exponent leaves the unsigned long range or the
// value exceeds bit_cap bits.
std::optional<mpz_class> naive_pow(const std::vector<mpz_class>& args, std::size_t bit_cap);

// lhs <= rhs when both are evaluable; an evaluable side beats an overflowing
// one. nullopt when neither side fits.
std::optional<bool> le(const std::optional<mpz_class>& lhs, const std::optional<mpz_class>& rhs);

struct LawTally {
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::size_t violations = 0;
  std::string first_violation;
};

// The five pow laws on `tuples` random argument tuples with entries in [1, 6].
// Index 0 is the flattening equality, 1..4 the inequalities in their usual
// order.
std::vector<LawTally> check_pow_laws(std::mt19937_64& rng, std::size_t tuples, std::size_t bit_cap);

// An order-2 type system over states p, q with no transitions and the monoid
// {1, ne}, plus all order-0 descriptors with assumption sets of size at most
// one.
struct Universe {
  std::shared_ptr<hopda::TypeSystem> ts;
  std::vector<hopda::DescId> order0;
  std::vector<hopda::DescId> order1;
  std::vector<hopda::DescId> order2;
};
Universe small_universe();

struct AssocCompoTally {
  std::size_t bases = 0;
  std::size_t composers = 0;
  std::size_t violations = 0;
  std::string first_violation;
};
// Splits the composer of every base at each j and compares both sides.
AssocCompoTally check_assoc_compo(hopda::TypeSystem& ts, const std::vector<hopda::AssumptionSet>& bases);

// Bases of size one and two over the order-0 descriptors, with monoid
// elements drawn from rng.
std::vector<hopda::AssumptionSet> sample_bases(const Universe& u, std::mt19937_64& rng, std::size_t count);

// A random well-formed annotated 2-stack over the symbol set of the judgment
// set, typed by a random subset of its realizable types.
hopda::AStack random_well_formed(hopda::TypeSystem& ts, const hopda::JudgmentSet& j, std::mt19937_64& rng);

}  // namespace support
