#include <doctest.h>

#include "hopda/fixtures.hpp"
#include "hopda/milestone.hpp"
#include "hopda/runcalc.hpp"
#include "hopda/seplang.hpp"

using namespace hopda;

TEST_CASE("star runs") {
  const Automaton a = fixture_automaton("loop3");
  const Configuration c = initial_configuration(a);
  const StarRun none = star_run(a, c, 0);
  CHECK(none.run.length() == 0);
  CHECK(none.halt == Halt::None);

  const StarRun r = star_run(a, c, 50);
  CHECK(r.run.length() == 50);
  CHECK(r.halt == Halt::None);
  CHECK(r.run.word() == std::string(7, '*'));

  const Automaton b = parse_automaton(
      "order: 1\nmode: plain\ninput: '*' 'a'\nstack: g\ninit-state: p\ninit-symbol: g\naccepting:\n"
      "trans p g -> read { 'a': p }\n");
  const StarRun stuck = star_run(b, initial_configuration(b), 10);
  CHECK(stuck.run.length() == 0);
  CHECK(stuck.halt == Halt::LetterNotAccepted);
  CHECK_THROWS_AS(star_run(b, initial_configuration(b), 10, '%'), Error);
}

TEST_CASE("star detection") {
  CHECK(detects_star_words(stars_only_morphism("*#")));
  CHECK(detects_star_words(star_sharp_bracket_morphism()));
  CHECK_FALSE(detects_star_words(nonempty_morphism("*#")));
  CHECK_FALSE(detects_star_words(trivial_morphism("*#")));
  const Automaton a = fixture_automaton("loop3");
  CHECK_THROWS_AS(certify_milestone(a, nonempty_morphism("*#"), initial_configuration(a)), Error);
}

TEST_CASE("loop3 is certified by a type loop") {
  const Automaton a = fixture_automaton("loop3");
  const Morphism m = stars_only_morphism("*#");
  MilestoneBudget b;
  b.max_steps = 60;
  const CertifyResult res = certify_milestone(a, m, initial_configuration(a), b);
  REQUIRE(res.certificate);
  CHECK(res.certificate->kind == CertificateKind::LoopByType);
  CHECK(res.certificate->i == 0);
  CHECK(res.certificate->j == 7);
  CHECK(res.certificate->to_json()["kind"] == "loop-by-type");

  MilestoneBudget periods_only = b;
  periods_only.types.max_judgments = 1;
  CHECK_THROWS_AS(certify_milestone(a, m, initial_configuration(a), periods_only), Error);
}

TEST_CASE("loop3 certified indices") {
  const Automaton a = fixture_automaton("loop3");
  MilestoneBudget b;
  b.max_steps = 60;
  const std::size_t bound = 150;
  const SequenceReport rep = milestone_sequence_check(a, stars_only_morphism("*#"), initial_configuration(a), bound, b);
  std::vector<std::size_t> expected;
  for (std::size_t i = 0; i <= bound; ++i)
    if (positionless(top(2, rep.star.run.at(i).stack)).str() == "[[a,a]]") expected.push_back(i);
  CHECK(rep.certified == expected);
  CHECK(rep.certified.size() >= bound / 7);
  CHECK(rep.violations == 0);
  CHECK(rep.checked.size() + 1 == rep.certified.size());
  for (CertificateKind k : rep.kinds) CHECK(k == CertificateKind::LoopByType);
}

TEST_CASE("U receives period certificates") {
  const Automaton u = build_u_automaton();
  const Configuration c = run_word(u, "[*").run.back();
  const CertifyResult res = certify_milestone(u, star_sharp_bracket_morphism(), c);
  REQUIRE(res.certificate);
  CHECK(res.certificate->kind == CertificateKind::LoopByPeriod);
  CHECK(res.certificate->periods_verified == MilestoneBudget{}.periods);
  CHECK(std::string(to_string(res.certificate->kind)) == "loop-by-period(heuristic)");

  MilestoneBudget strict;
  strict.allow_period = false;
  const CertifyResult none = certify_milestone(u, star_sharp_bracket_morphism(), c, strict);
  CHECK_FALSE(none.certificate);
  CHECK_FALSE(none.reason.empty());

  MilestoneBudget b;
  b.max_steps = 80;
  const SequenceReport rep = milestone_sequence_check(u, star_sharp_bracket_morphism(), c, 100, b);
  CHECK(rep.violations == 0);
  CHECK_FALSE(rep.certified.empty());
}

TEST_CASE("halting star runs are not certified") {
  const Automaton a = parse_automaton(
      "order: 1\nmode: plain\ninput: '*'\nstack: g\ninit-state: p\ninit-symbol: g\naccepting:\n"
      "trans p g -> read { '*': q }\n");
  const CertifyResult res = certify_milestone(a, stars_only_morphism("*"), initial_configuration(a));
  CHECK_FALSE(res.certificate);
  CHECK(res.halt == Halt::NoTransition);
}
