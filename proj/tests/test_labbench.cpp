#include <doctest.h>

#include <algorithm>

#include "hopda/labbench.hpp"
#include "hopda/seplang.hpp"

using namespace hopda;

TEST_CASE("the word family") {
  CHECK(word_family(0, 2) == "[");
  CHECK(word_family(1, 2) == "[[]][");
  CHECK(word_family(1, 3) == "[[[]]][");
  for (int n = 1; n <= 4; ++n)
    for (int k = 0; k < 3; ++k) {
      CAPTURE(n);
      CAPTURE(k);
      CHECK(word_family(k + 1, n).size() == n * word_family(k, n).size() + n + 1);
      CHECK(word_family(k + 1, n).rfind(word_family(k, n), 0) == 0);
    }
  CHECK_THROWS_AS(word_family(5, 2), Error);
  CHECK_THROWS_AS(word_family(1, 9), Error);
  CHECK_THROWS_AS(word_family(-1, 2), Error);
}

TEST_CASE("slot words") {
  const SlotWord w = SlotWord::parse("[[]]|[");
  CHECK(w.before == "[[]]");
  CHECK(w.after == "[");
  CHECK(w.fill(3) == "[[]]***[");
  CHECK_THROWS_AS(SlotWord::parse("[[]]"), Error);
  CHECK_THROWS_AS(SlotWord::parse("[|[|"), Error);
}

TEST_CASE("sharp growth follows the stars oracle") {
  const SlotWord w = SlotWord::parse(word_family(1, 2) + "|" + "[");
  const std::vector<SharpGrowthRow> rows = sharp_growth_experiment(w, {0, 1, 2, 5, 9});
  REQUIRE(rows.size() == 5);
  const std::size_t base = stars(w.fill(0));
  for (const SharpGrowthRow& row : rows) {
    CAPTURE(row.inserted);
    CHECK(row.oracle_stars == stars(w.fill(row.inserted)));
    CHECK(row.accepted == std::vector<std::size_t>{row.oracle_stars + 1});
    CHECK(row.oracle_stars == base + row.inserted);
  }

  // Stars after the last open bracket are never counted.
  const SlotWord tail = SlotWord::parse("[[]]|");
  for (const SharpGrowthRow& row : sharp_growth_experiment(tail, {0, 4, 8}))
    CHECK(row.accepted == std::vector<std::size_t>{stars("[[]]") + 1});

  CHECK(sharp_growth_experiment(w, {}).empty());
  const nlohmann::json j = sharp_growth_json(rows);
  CHECK(j.size() == rows.size());
}

TEST_CASE("replaying a run from its own start is parallel") {
  const Automaton u = build_u_automaton();
  const WordRun w = run_word(u, "[[*]");
  const Run r = w.run.subrun(3, w.run.length());
  const ReplayReport rep = replay_parallel_check(u, star_sharp_bracket_morphism(), r.at(0), r, 0);
  CHECK_FALSE(rep.halted);
  CHECK(rep.steps == r.length());
  CHECK(rep.parallel);
  CHECK_FALSE(rep.types_r0);
  CHECK(rep.to_json()["parallel"] == true);
}

TEST_CASE("replay preconditions") {
  const Automaton u = build_u_automaton();
  const WordRun w = run_word(u, "[[*]");
  const Run r = w.run.subrun(3, w.run.length());
  const Configuration other = run_word(u, "").run.at(0);
  auto kind_of = [&](const Configuration& c, int k) {
    try {
      replay_parallel_check(u, star_sharp_bracket_morphism(), c, r, k);
    } catch (const Error& e) {
      return std::optional<ErrorKind>(e.kind());
    }
    return std::optional<ErrorKind>();
  };
  CHECK(kind_of(other, 1) == ErrorKind::Precondition);
  CHECK(kind_of(other, 2) == ErrorKind::Precondition);
  CHECK_FALSE(kind_of(r.at(0), 2));
}

TEST_CASE("random automata and fixtures") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    const Automaton a = random_plain_automaton(rng);
    CHECK(a.order == 2);
    CHECK_FALSE(a.collapse());
    CHECK(a.states.size() >= 4);
    CHECK(a.states.size() <= 7);
    CHECK(a.has_letter('#'));
  }
  std::size_t built = 0;
  for (int i = 0; i < 30; ++i) {
    const std::optional<TypedFixture> f = random_typed_fixture(rng);
    if (!f) continue;
    ++built;
    TypeSystem& ts = *f->ts;
    CHECK(well_formed(ts, f->start));
    CHECK(singular(ts, f->start));
    CHECK(same_configuration(conf(ts, f->start), f->config));
  }
  CHECK(built > 10);
}
