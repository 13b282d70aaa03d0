#include "support.hpp"

#include <sstream>

#include "hopda/measures.hpp"

namespace support {

using namespace hopda;

std::optional<mpz_class> naive_pow(const std::vector<mpz_class>& args, std::size_t bit_cap) {
  if (args.empty()) return mpz_class(1);
  const std::optional<mpz_class> rest = naive_pow(std::vector<mpz_class>(args.begin() + 1, args.end()), bit_cap);
  if (!rest || !rest->fits_ulong_p()) return std::nullopt;
  const mpz_class base = args[0] + 1;
  if (static_cast<double>(mpz_sizeinbase(base.get_mpz_t(), 2) - 1) * rest->get_d() > static_cast<double>(bit_cap))
    return std::nullopt;
  mpz_class out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), rest->get_ui());
  out -= 1;
  if (mpz_sizeinbase(out.get_mpz_t(), 2) > bit_cap) return std::nullopt;
  return out;
}

std::optional<bool> le(const std::optional<mpz_class>& lhs, const std::optional<mpz_class>& rhs) {
  if (lhs && rhs) return *lhs <= *rhs;
  if (lhs) return true;
  if (rhs) return false;
  return std::nullopt;
}

namespace {

using Args = std::vector<mpz_class>;
using Val = std::optional<mpz_class>;

// pow is at least each of its arguments and monotone in all of them, so a
// value beyond the cap anywhere in a nested expression puts the whole
// expression beyond the cap.
Val P(const Args& args, std::size_t cap) {
  try {
    return pow_tower(args, cap);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Overflow) throw;
    return std::nullopt;
  }
}

Args cat(Args a, const Args& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::string show(const Args& a) {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < a.size(); ++i) out << (i ? "," : "") << a[i].get_str();
  out << ")";
  return out.str();
}

}  // namespace

std::vector<LawTally> check_pow_laws(std::mt19937_64& rng, std::size_t tuples, std::size_t cap) {
  auto num = [&] { return mpz_class(std::uniform_int_distribution<int>(1, 6)(rng)); };
  auto args = [&](int lo, int hi) {
    Args out(std::uniform_int_distribution<int>(lo, hi)(rng));
    for (mpz_class& x : out) x = num();
    return out;
  };
  std::vector<LawTally> tally(5);
  auto record = [&](int law, std::optional<bool> ok, const std::string& what) {
    LawTally& t = tally[law];
    if (!ok) {
      ++t.skipped;
      return;
    }
    ++t.checked;
    if (!*ok && t.violations++ == 0) t.first_violation = what;
  };

  for (std::size_t n = 0; n < tuples; ++n) {
    {
      const Args a = args(0, 2), b = args(1, 2);
      const Val inner = P(b, cap);
      const Val lhs = inner ? P(cat(a, {*inner}), cap) : std::nullopt;
      const Val rhs = P(cat(a, b), cap);
      record(0, lhs && rhs ? std::optional<bool>(*lhs == *rhs) : std::nullopt, show(a) + show(b));
    }
    {
      const Args a = args(0, 2);
      const int l = std::uniform_int_distribution<int>(0, 2)(rng);
      Args b(l), c(l + 1);
      for (mpz_class& x : b) x = num();
      for (mpz_class& x : c) x = num();
      const Val inner = P(c, cap);
      const Val lhs = inner ? P(cat(cat(a, {*inner}), b), cap) : std::nullopt;
      Args right = cat(a, {c[0]});
      for (int i = 0; i < l; ++i) right.push_back(b[i] * c[i + 1]);
      record(1, le(lhs, P(right, cap)), show(a) + show(b) + show(c));
    }
    {
      const Args a = args(2, 3);
      const std::size_t i = std::uniform_int_distribution<std::size_t>(0, a.size() - 2)(rng);
      const unsigned long x = std::uniform_int_distribution<unsigned long>(1, 6)(rng);
      Args left = a;
      mpz_pow_ui(left[i].get_mpz_t(), a[i].get_mpz_t(), x);
      Args right = a;
      right.back() *= x;
      record(2, le(P(left, cap), P(right, cap)), show(a) + " i=" + std::to_string(i) + " x=" + std::to_string(x));
    }
    {
      const Args a = args(1, 3);
      const Val base = P(a, cap);
      Args bumped = a;
      bumped.back() += 1;
      record(3, le(base ? Val(*base + 1) : std::nullopt, P(bumped, cap)), show(a));
    }
    {
      const Args a = args(1, 3);
      Args b(a.size()), ab(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        b[i] = num();
        ab[i] = a[i] * b[i];
      }
      const Val x = P(a, cap), y = P(b, cap);
      record(4, le(x && y ? Val(*x * *y) : std::nullopt, P(ab, cap)), show(a) + show(b));
    }
  }
  return tally;
}

Universe small_universe() {
  const Automaton a = parse_automaton(
      "order: 2\nmode: plain\ninput: 'a' '#'\nstack: g\ninit-state: p\ninit-symbol: g\naccepting:\nstates: p q\n");
  Universe u;
  u.ts = std::make_shared<TypeSystem>(a, nonempty_morphism("a#"));
  TypeSystem& ts = *u.ts;
  const int elems[] = {ts.elem("1"), ts.elem("ne")};
  for (int q = 0; q < 2; ++q)
    for (bool f : {false, true}) u.order2.push_back(ts.descriptor(q, {}, f));

  std::vector<AssumptionSet> ass2{{}};
  for (int m : elems)
    for (DescId d : u.order2) ass2.push_back({{m, d}});
  for (int q = 0; q < 2; ++q)
    for (const AssumptionSet& s : ass2)
      for (bool f : {false, true}) u.order1.push_back(ts.descriptor(q, {s}, f));

  std::vector<AssumptionSet> ass1{{}};
  for (int m : elems)
    for (DescId d : u.order1) ass1.push_back({{m, d}});
  for (int q = 0; q < 2; ++q)
    for (const AssumptionSet& s2 : ass2)
      for (const AssumptionSet& s1 : ass1)
        for (bool f : {false, true}) u.order0.push_back(ts.descriptor(q, {s2, s1}, f));
  return u;
}

std::vector<AssumptionSet> sample_bases(const Universe& u, std::mt19937_64& rng, std::size_t count) {
  const int elems[] = {u.ts->elem("1"), u.ts->elem("ne")};
  auto any = [&] {
    return Assumption{elems[rng() % 2], u.order0[rng() % u.order0.size()]};
  };
  std::vector<AssumptionSet> out;
  for (std::size_t n = 0; n < count; ++n) {
    AssumptionSet base{any()};
    if (n % 2) base.push_back(any());
    normalize(base);
    out.push_back(std::move(base));
  }
  return out;
}

AssocCompoTally check_assoc_compo(TypeSystem& ts, const std::vector<AssumptionSet>& bases) {
  AssocCompoTally t;
  auto attempt = [&](const AssumptionSet& base, int l, int k) -> std::optional<Composer> {
    try {
      return composer_from_base(ts, base, l, k);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotComposer) throw;
      return std::nullopt;
    }
  };
  auto fail = [&](const AssumptionSet& base, int j, const std::string& what) {
    if (t.violations++ == 0) t.first_violation = ts.str(base) + " at j=" + std::to_string(j) + ": " + what;
  };
  const int n = ts.n();
  for (const AssumptionSet& base : bases) {
    ++t.bases;
    const std::optional<Composer> whole = attempt(base, 0, n);
    if (whole) ++t.composers;
    for (int j = 0; j <= n; ++j) {
      const std::optional<Composer> lower = attempt(base, 0, j);
      const std::optional<Composer> upper = lower ? attempt(lower->psi, j, n) : std::nullopt;
      if (whole.has_value() != (lower && upper)) {
        fail(base, j, "existence differs");
        continue;
      }
      if (!whole) continue;
      if (whole->psi != upper->psi) fail(base, j, "Psi differs");
      for (int i = 1; i <= n; ++i) {
        const AssumptionSet& split = i <= j ? lower->at(i) : upper->at(i);
        if (whole->at(i) != split) fail(base, j, "Phi^" + std::to_string(i) + " differs");
      }
      if (whole->productive != (lower->productive || upper->productive)) fail(base, j, "flags differ");
    }
  }
  return t;
}

AStack random_well_formed(TypeSystem& ts, const JudgmentSet& j, std::mt19937_64& rng) {
  const Automaton& a = ts.automaton();
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::vector<Plain> outer;
  for (int i = pick(1, 3); i > 0; --i) {
    std::vector<Plain> cells;
    for (int c = pick(0, 3); c > 0; --c)
      cells.push_back(Plain::cell(a.stack_alphabet[pick(0, static_cast<int>(a.stack_alphabet.size()) - 1)]));
    outer.push_back(Plain::list(1, std::move(cells)));
  }
  const Plain p = Plain::list(2, std::move(outer));
  Realizer r(ts, j);
  DescSet want;
  for (DescId d : r.realizable(p))
    if (rng() % 2 && want.size() < 3) want.push_back(d);
  return r.realize(p, want, rng);
}

}  // namespace support
