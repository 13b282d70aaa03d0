#include <doctest.h>

#include <random>

#include "hopda/error.hpp"
#include "hopda/monoid.hpp"

using namespace hopda;

namespace {

std::string pattern_of(std::string_view w) {
  std::string p;
  for (char c : w)
    if (c == '[' || c == ']') p += c;
  return p;
}

std::string brute_pattern_name(std::string_view w, int bound) {
  const bool sharp = w.find('#') != std::string_view::npos;
  std::string p = pattern_of(w);
  if (static_cast<int>(p.size()) > bound) return pattern_element_name(sharp, std::nullopt);
  return pattern_element_name(sharp, p);
}

// Class of a word for the star/sharp/bracket morphism, computed directly.
std::string form_of(std::string_view w) {
  if (w.empty()) return "empty";
  if (w.find_first_not_of('#') == std::string_view::npos) return "sharps";
  if (w.find_first_not_of('*') == std::string_view::npos) return "stars";
  if (w.find_first_not_of("*]") == std::string_view::npos &&
      std::count(w.begin(), w.end(), ']') == 1)
    return "star-bracket";
  return "other";
}

void all_words(std::string_view alphabet, std::size_t max_len,
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

TEST_CASE("nonempty monoid") {
  Morphism m = nonempty_morphism("ab#");
  CHECK_FALSE(m.monoid().audit());
  CHECK(m.monoid().name(m.eval("")) == "1");
  CHECK(m.monoid().name(m.eval("ab")) == "ne");
  CHECK(m.monoid().name(m.eval("#")) == "ne");
  CHECK_THROWS_AS(m.eval("c"), Error);
}

TEST_CASE("homomorphism law on random splits") {
  std::mt19937 rng(3);
  Morphism ms[] = {nonempty_morphism("[]*#"), star_sharp_bracket_morphism(), pattern_morphism(4),
                   counting_morphism("[]*#", '*', 3)};
  const std::string alphabet = "[]*#";
  for (const Morphism& m : ms) {
    CHECK_FALSE(m.monoid().audit());
    for (int t = 0; t < 300; ++t) {
      std::string w;
      const int len = static_cast<int>(rng() % 12);
      for (int i = 0; i < len; ++i) w += alphabet[rng() % 4];
      const std::size_t cut = w.empty() ? 0 : rng() % (w.size() + 1);
      CHECK(m.eval(w) == m.monoid().mul(m.eval(w.substr(0, cut)), m.eval(w.substr(cut))));
    }
    CHECK(m.eval("") == m.monoid().identity());
  }
}

TEST_CASE("star sharp bracket classes") {
  Morphism m = star_sharp_bracket_morphism();
  CHECK(m.eval("##") == m.eval("#"));
  CHECK(m.eval("[") != m.eval("#"));
  CHECK(m.eval("*]*") == m.eval("]"));
  CHECK(m.eval("") != m.eval("#"));
  CHECK(m.eval("") != m.eval("["));
  all_words("[]*#", 6, [&](const std::string& w) {
    CHECK(m.monoid().name(m.eval(w)) == form_of(w));
  });
}

TEST_CASE("pattern morphism") {
  Morphism m4 = pattern_morphism(4);
  CHECK(m4.monoid().name(m4.eval("*[*")) == "-:[");
  Morphism m3 = pattern_morphism(3);
  CHECK(m3.monoid().name(m3.eval("[[[[[")) == "-:overflow");
  CHECK(m3.monoid().name(m3.monoid().identity()) == "-:");
  CHECK(m3.monoid().name(m3.eval("[#]")) == "#:[]");
  CHECK_THROWS_AS(pattern_morphism(9), Error);
  CHECK_THROWS_AS(pattern_morphism(-1), Error);
  for (int bound : {0, 1, 2, 3, 4}) {
    Morphism m = pattern_morphism(bound);
    CHECK_FALSE(m.monoid().audit());
    all_words("[]*#", static_cast<std::size_t>(std::min(bound + 2, 10)), [&](const std::string& w) {
      CHECK(m.monoid().name(m.eval(w)) == brute_pattern_name(w, bound));
    });
  }
}

TEST_CASE("audit catches broken tables") {
  Monoid bad({"1", "x"}, 0, {{0, 1}, {1, 0}});
  CHECK_FALSE(bad.audit());  // Z/2 is fine
  Monoid no_identity({"a", "b"}, 0, {{1, 1}, {1, 1}});
  CHECK(no_identity.audit());
  Monoid not_assoc({"1", "a", "b"}, 0, {{0, 1, 2}, {1, 2, 0}, {2, 2, 2}});
  CHECK(not_assoc.audit());
}

TEST_CASE("json round trip") {
  Morphism m = star_sharp_bracket_morphism();
  Morphism back = Morphism::from_json(m.to_json());
  for (const char* w : {"", "#", "##", "*]*", "[", "**"})
    CHECK(m.monoid().name(m.eval(w)) == back.monoid().name(back.eval(w)));
  nlohmann::json broken = m.to_json();
  broken["monoid"]["table"][0][1] = 2;
  CHECK_THROWS_AS(Morphism::from_json(broken), Error);
}
