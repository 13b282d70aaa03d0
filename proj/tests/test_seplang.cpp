#include <doctest.h>

#include <random>

#include "hopda/fixtures.hpp"
#include "hopda/seplang.hpp"

using namespace hopda;

namespace {

// Brute-force matcher: pair each ']' with the nearest unmatched '[' on its left.
std::size_t stars_brute(const std::string& w) {
  std::vector<bool> matched(w.size(), false);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] != ']') continue;
    bool found = false;
    for (std::size_t j = i; j-- > 0;) {
      if (w[j] == '[' && !matched[j]) {
        matched[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return 0;
  }
  std::size_t last = std::string::npos;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] == '[' && !matched[i]) last = i;
  if (last == std::string::npos) return 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < last; ++i) n += w[i] == '*';
  return n;
}

// Index of the last unmatched '[', or npos when there is none or a prefix over-closes.
std::size_t last_unmatched_brute(const std::string& w) {
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == '[') open.push_back(i);
    if (w[i] == ']') {
      if (open.empty()) return std::string::npos;
      open.pop_back();
    }
  }
  return open.empty() ? std::string::npos : open.back();
}

}  // namespace

TEST_CASE("stars examples") {
  CHECK(stars("") == 0);
  CHECK(stars("*[*") == 1);
  CHECK(stars("**[*]*[**") == 4);
  CHECK(stars("]*[") == 0);
  CHECK_THROWS_AS(stars("#"), Error);
}

TEST_CASE("stars agrees with the brute-force matcher") {
  std::mt19937 rng(11);
  const char alphabet[] = {'[', ']', '*'};
  for (int i = 0; i < 20000; ++i) {
    std::string w;
    std::size_t len = rng() % 16;
    for (std::size_t j = 0; j < len; ++j) w += alphabet[rng() % 3];
    REQUIRE_MESSAGE(stars(w) == stars_brute(w), w);
  }
}

TEST_CASE("u membership examples") {
  CHECK(u_member("[#"));
  CHECK(u_member("*[*##"));
  CHECK(u_member("[]#"));
  CHECK_FALSE(u_member("[]##"));
  CHECK(u_member("#"));
  CHECK_FALSE(u_member(""));
  CHECK_FALSE(u_member("[#["));
}

TEST_CASE("u automaton basics") {
  Automaton u = build_u_automaton();
  CHECK(u.order == 2);
  CHECK(u.collapse());
  CHECK(u.states.size() <= 12);
  CHECK(run_word(u, "[#").accepted);
  CHECK_FALSE(run_word(u, "[##").accepted);
  CHECK(run_word(u, "#").accepted);
  CHECK(run_word(u, "**[*]*[**#####").accepted);
  CHECK_FALSE(run_word(u, "**[*]*[**####").accepted);
  CHECK_FALSE(run_word(u, "**[*]*[**######").accepted);
}

TEST_CASE("stars grows by one per star inserted before the last unmatched bracket") {
  std::mt19937 rng(5);
  const char alphabet[] = {'[', ']', '*'};
  int checked = 0;
  for (int i = 0; i < 4000; ++i) {
    std::string w;
    std::size_t len = 1 + rng() % 12;
    for (std::size_t j = 0; j < len; ++j) w += alphabet[rng() % 3];
    std::size_t last = last_unmatched_brute(w);
    if (last == std::string::npos) continue;
    ++checked;
    std::size_t s = stars(w);
    for (std::size_t j = 0; j <= 5; ++j) {
      std::string before = w, after = w;
      before.insert(rng() % (last + 1), std::string(j, '*'));
      after.insert(last + 1 + rng() % (w.size() - last), std::string(j, '*'));
      CHECK(stars(before) == s + j);
      CHECK(stars(after) == s);
    }
  }
  CHECK(checked > 500);
}
