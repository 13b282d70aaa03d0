#include "hopda/measures.hpp"

namespace hopda {

namespace {

void guard(const mpz_class& x, std::size_t cap) {
  if (mpz_sizeinbase(x.get_mpz_t(), 2) > cap)
    throw Error(ErrorKind::Overflow, "value exceeds " + std::to_string(cap) + " bits");
}

}  // namespace

mpz_class pow_tower(const std::vector<mpz_class>& args, std::size_t bit_cap) {
  for (const mpz_class& a : args)
    if (a <= 0) throw Error(ErrorKind::Precondition, "pow takes positive arguments");
  mpz_class acc = 1;
  for (std::size_t i = args.size(); i-- > 0;) {
    const mpz_class base = args[i] + 1;
    const double bits = static_cast<double>(mpz_sizeinbase(base.get_mpz_t(), 2) - 1) * acc.get_d();
    if (!acc.fits_ulong_p() || bits > static_cast<double>(bit_cap))
      throw Error(ErrorKind::Overflow, "pow exceeds " + std::to_string(bit_cap) + " bits");
    mpz_class p;
    mpz_pow_ui(p.get_mpz_t(), base.get_mpz_t(), acc.get_ui());
    acc = p - 1;
    guard(acc, bit_cap);
  }
  return acc;
}

MeasureContext MeasureContext::table(std::vector<mpz_class> c, std::size_t bit_cap) {
  if (c.empty() || c[0] < 2) throw Error(ErrorKind::Precondition, "the C-table needs C_0 >= 2");
  for (std::size_t i = 1; i < c.size(); ++i)
    if (c[i] < c[i - 1]) throw Error(ErrorKind::Precondition, "the C-table must be nondecreasing");
  MeasureContext ctx;
  ctx.c_ = std::move(c);
  ctx.bit_cap_ = bit_cap;
  return ctx;
}

MeasureContext MeasureContext::recurrence(std::size_t t0, int n, int max_depth, std::size_t bit_cap) {
  if (t0 == 0 || n < 1 || max_depth < 0) throw Error(ErrorKind::Precondition, "bad C-table parameters");
  std::vector<mpz_class> c{2};
  mpz_class factor;
  mpz_ui_pow_ui(factor.get_mpz_t(), 2 * t0, static_cast<unsigned long>(n));
  for (int z = 0; z < max_depth; ++z) {
    const double bits = static_cast<double>(mpz_sizeinbase(c.back().get_mpz_t(), 2)) * static_cast<double>(t0 + 1);
    if (bits > static_cast<double>(bit_cap)) throw Error(ErrorKind::Overflow, "C_" + std::to_string(z + 1) + " is too large");
    mpz_class next;
    mpz_pow_ui(next.get_mpz_t(), c.back().get_mpz_t(), t0 + 1);
    next *= factor;
    c.push_back(next);
  }
  return table(std::move(c), bit_cap);
}

const mpz_class& MeasureContext::C(int z) const {
  if (z < 0 || static_cast<std::size_t>(z) >= c_.size())
    throw Error(ErrorKind::Precondition, "no C_" + std::to_string(z) + " in a table of " + std::to_string(c_.size()));
  return c_[z];
}

namespace {

// An empty optional stands for a value beyond the cap and absorbs every
// operation it takes part in.
using Big = std::optional<mpz_class>;

void mul_into(Big& acc, const Big& x, std::size_t cap) {
  if (!acc || !x) {
    acc.reset();
    return;
  }
  *acc *= *x;
  if (mpz_sizeinbase(acc->get_mpz_t(), 2) > cap) acc.reset();
}

Big tower(const Big& a, const Big& b, std::size_t cap) {
  if (!a || !b) return std::nullopt;
  try {
    return pow_tower({*a, *b}, cap);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Overflow) throw;
    return std::nullopt;
  }
}

}  // namespace

Measures measures(TypeSystem& ts, const AStack& s, const MeasureContext& ctx) {
  const std::size_t cap = ctx.bit_cap();
  Measures m{0, mpz_class(1), mpz_class(1)};
  if (s.order == 0) {
    for (TreeId t : s.trees) {
      const Tree& tr = ts.tree(t);
      const Big c = ctx.C(tr.depth);
      mul_into(m.len, c, cap);
      if (ts.productive(tr.rd)) {
        m.low += 1;
        mul_into(m.high, c, cap);
      }
    }
    return m;
  }
  if (s.items.empty()) return m;
  AStack below{s.order, Symbol{}, {}, std::vector<AStack>(s.items.begin(), s.items.end() - 1)};
  const AStack& top = s.top_item();
  for (DescId sigma : type_of(ts, top)) {
    const Measures a = measures(ts, restrict_to(ts, below, pi2(ts.ass(sigma, s.order))), ctx);
    const Measures b = measures(ts, restrict_to(ts, top, {sigma}), ctx);
    m.low += a.low + b.low;
    mul_into(m.high, tower(a.high, b.high, cap), cap);
    mul_into(m.len, tower(a.len, b.len, cap), cap);
  }
  return m;
}

}  // namespace hopda
