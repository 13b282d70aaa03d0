#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "hopda/annotated.hpp"

namespace hopda {

// Results wider than this many bits raise Error(Overflow) instead of
// exhausting memory.
inline constexpr std::size_t kDefaultBitCap = 1u << 20;

// pow() = 1, pow(m1, m2, ...) = (1 + m1)^pow(m2, ...) - 1. Arguments must be
// positive.
mpz_class pow_tower(const std::vector<mpz_class>& args, std::size_t bit_cap = kDefaultBitCap);

// The constants C_0, C_1, ... used by high and len.
class MeasureContext {
 public:
  // Explicit table; needs C_0 >= 2 and a nondecreasing sequence.
  static MeasureContext table(std::vector<mpz_class> c, std::size_t bit_cap = kDefaultBitCap);
  // C_0 = 2, C_(z+1) = (2 t0)^n * C_z^(t0 + 1) for z < max_depth, where t0
  // bounds the number of order-0 descriptors.
  static MeasureContext recurrence(std::size_t t0, int n, int max_depth, std::size_t bit_cap = kDefaultBitCap);

  // Throws Error(Precondition) beyond the table.
  const mpz_class& C(int z) const;
  std::size_t size() const { return c_.size(); }
  std::size_t bit_cap() const { return bit_cap_; }

 private:
  std::vector<mpz_class> c_;
  std::size_t bit_cap_ = kDefaultBitCap;
};

// high and len are empty when they would exceed the bit cap of the context.
struct Measures {
  mpz_class low;
  std::optional<mpz_class> high;
  std::optional<mpz_class> len;
};

// low, high and len of a well-formed annotated stack.
Measures measures(TypeSystem& ts, const AStack& s, const MeasureContext& ctx);

}  // namespace hopda
