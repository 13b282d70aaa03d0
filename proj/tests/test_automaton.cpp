#include <doctest.h>

#include <functional>

#include "hopda/automaton.hpp"
#include "hopda/fixtures.hpp"

using namespace hopda;

TEST_CASE("table1 fixture steps through the printed stack column") {
  Automaton a = fixture_automaton("table1");
  WordRun r = run_word(a, "");
  REQUIRE(r.accepted);
  const char* expected[] = {"[[a,b],[c,d]]", "[[a,b],[c,d],[c,e]]", "[[a,b],[c,d],[c]]",
                            "[[a,b],[c,d]]", "[[a,b],[c]]",         "[[a,b],[c,d]]",
                            "[[a,b],[c]]"};
  REQUIRE(r.run.length() == 6);
  for (std::size_t j = 0; j <= 6; ++j) CHECK(render(r.run.at(j).stack) == expected[j]);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_automaton(""), Error);
  CHECK_THROWS_AS(parse_automaton("; only a comment\n"), Error);
  const char* noninjective =
      "order: 1\ninput: 'a' 'b'\nstack: Z\ninit-state: p\ninit-symbol: Z\n"
      "trans p Z -> read { 'a': q, 'b': q }\n";
  try {
    parse_automaton(noninjective);
    FAIL("expected an injectivity error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Injectivity);
  }
  const char* plain_collapse =
      "order: 2\nmode: plain\ninput: 'a'\nstack: Z\ninit-state: p\ninit-symbol: Z\n"
      "trans p Z -> q collapse\n";
  try {
    parse_automaton(plain_collapse);
    FAIL("expected a mode error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CollapseUnsupported);
  }
  const char* unknown =
      "order: 1\ninput: 'a'\nstack: Z\ninit-state: p\ninit-symbol: Z\n"
      "trans p W -> q pop1\n";
  CHECK_THROWS_AS(parse_automaton(unknown), Error);
  const char* bad_line = "order: 1\ninput: 'a'\nbogus line here\n";
  try {
    parse_automaton(bad_line);
    FAIL("expected a syntax error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("source round trip") {
  for (const auto& name : fixture_automaton_names()) {
    Automaton a = fixture_automaton(name);
    Automaton b = parse_automaton(to_source(a));
    CHECK(to_source(a) == to_source(b));
  }
}

TEST_CASE("step halts") {
  Automaton a = fixture_automaton("a1");
  Configuration c = initial_configuration(a);
  // q1 push1, q2 push2, q3 pop1 -> q4 reading.
  for (int i = 0; i < 3; ++i) c = *step(a, c, std::nullopt).next;
  CHECK(a.state_name(c.state) == "q4");
  StepOutcome bad = step(a, c, 'z');
  CHECK(bad.halt == Halt::LetterNotAccepted);
  CHECK_THROWS_AS(step(a, c, std::nullopt), Error);

  Automaton b = fixture_automaton("a2");
  Configuration d = initial_configuration(b);
  d = *step(b, d, std::nullopt).next;
  CHECK(d.stack.size() == 2);
  CHECK(step(b, d, std::nullopt).halt == Halt::BlockedPop);
}

TEST_CASE("blocked pop2 on a singleton 2-stack") {
  const char* src =
      "order: 2\ninput: 'a'\nstack: Z\ninit-state: p\ninit-symbol: Z\n"
      "trans p Z -> q pop2\n";
  Automaton a = parse_automaton(src);
  StepOutcome s = step(a, initial_configuration(a), std::nullopt);
  CHECK(s.halt == Halt::BlockedPop);
  WordRun r = run_word(a, "");
  CHECK(r.halt == Halt::BlockedPop);
  CHECK_FALSE(r.accepted);
}

TEST_CASE("empty word is rejected when the initial state is not accepting") {
  Automaton a = fixture_automaton("anbn");
  CHECK_FALSE(run_word(a, "").accepted);
}

TEST_CASE("silent divergence is reported") {
  const char* src =
      "order: 1\ninput: 'a'\nstack: Z\ninit-state: p\ninit-symbol: Z\n"
      "trans p Z -> p push1 Z\n";
  Automaton a = parse_automaton(src);
  WordRun r = run_word(a, "a", 1000);
  CHECK(r.halt == Halt::SilentBudgetExceeded);
  CHECK_FALSE(r.accepted);
}

TEST_CASE("determinism: successor counts per configuration") {
  for (const char* name : {"a1", "a2", "anbn", "u"}) {
    Automaton a = fixture_automaton(name);
    std::vector<Configuration> frontier{initial_configuration(a)};
    for (int depth = 0; depth < 6; ++depth) {
      std::vector<Configuration> next;
      for (const auto& c : frontier) {
        const Transition* t = a.delta(c.state, top_cell(c.stack).symbol);
        if (!t) continue;
        if (t->is_read) {
          std::size_t count = 0;
          for (char l : a.input) {
            StepOutcome s = step(a, c, l);
            if (s.next) {
              ++count;
              next.push_back(*s.next);
            }
          }
          CHECK(count == t->read.size());
        } else {
          StepOutcome s = step(a, c, std::nullopt);
          bool blocked = t->op.kind != OpKind::Push && !try_apply(t->op, c.stack, a.collapse());
          CHECK(s.next.has_value() == !blocked);
          if (s.next) next.push_back(*s.next);
        }
      }
      frontier = std::move(next);
    }
  }
}

TEST_CASE("subrun composition") {
  Automaton a = fixture_automaton("table1");
  Run r = run_word(a, "").run;
  for (std::size_t i = 0; i <= r.length(); ++i)
    for (std::size_t j = i; j <= r.length(); ++j)
      for (std::size_t k = j; k <= r.length(); ++k) {
        Run c = r.subrun(i, j).compose(r.subrun(j, k));
        Run d = r.subrun(i, k);
        REQUIRE(c.length() == d.length());
        for (std::size_t x = 0; x <= c.length(); ++x)
          CHECK(same_configuration(c.at(x), d.at(x)));
        for (std::size_t x = 0; x < c.length(); ++x) CHECK(c.witness(x).op == d.witness(x).op);
      }
  CHECK_THROWS_AS(r.subrun(0, 2).compose(r.subrun(3, 4)), Error);
}

namespace {

// Independent recognizer for { a^k b a^k # }.
bool anbn_oracle(const std::string& w) {
  std::size_t b = w.find('b');
  if (b == std::string::npos || w.empty() || w.back() != '#') return false;
  std::string left = w.substr(0, b), right = w.substr(b + 1, w.size() - b - 2);
  if (left.find_first_not_of('a') != std::string::npos) return false;
  if (right.find_first_not_of('a') != std::string::npos) return false;
  return left.size() == right.size();
}

void all_words(const std::string& alphabet, std::size_t max_len,
               const std::function<void(const std::string&)>& f) {
  std::vector<std::string> layer{""};
  f("");
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::string> next;
    for (const auto& w : layer)
      for (char c : alphabet) {
        next.push_back(w + c);
        f(next.back());
      }
    layer = std::move(next);
  }
}

}  // namespace

TEST_CASE("anbn fixture against its oracle, and its order lift") {
  Automaton a = fixture_automaton("anbn");
  Automaton lifted = order_lift(a);
  CHECK(lifted.order == 2);
  std::size_t accepted = 0;
  all_words("ab#", 8, [&](const std::string& w) {
    bool base = run_word(a, w).accepted;
    CHECK_MESSAGE(base == anbn_oracle(w), w);
    CHECK_MESSAGE(run_word(lifted, w).accepted == base, w);
    accepted += base;
  });
  CHECK(accepted == 4);  // #, ab a#, aabaa#, aaabaaa#
}

TEST_CASE("order lift refuses automata that already use the target order") {
  Automaton a = fixture_automaton("a1");
  CHECK_THROWS_AS(order_lift(a, 2), Error);
  CHECK_NOTHROW(order_lift(a, 3));
}

TEST_CASE("trace json") {
  Automaton a = fixture_automaton("table1");
  auto j = trace_json(a, run_word(a, "").run);
  REQUIRE(j.size() == 7);
  CHECK(j[0]["letter"].is_null());
  CHECK(j[1]["op"] == "push2 e");
  CHECK(j[1]["stack"].dump() == R"([["a","b"],["c","d"],["c","e"]])");
}
