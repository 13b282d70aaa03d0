#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace hopda {

class Run;

// Finite monoid given by its multiplication table. Elements are indices. The
// constructor trusts the table; from_json and tests run audit().
class Monoid {
 public:
  Monoid() = default;
  Monoid(std::vector<std::string> names, int identity, std::vector<std::vector<int>> table);

  int size() const { return static_cast<int>(names_.size()); }
  int identity() const { return identity_; }
  int mul(int a, int b) const { return table_[a][b]; }
  const std::string& name(int e) const { return names_.at(e); }
  int index_of(std::string_view name) const;  // -1 when unknown

  // nullopt when the table is total, associative and has a two-sided identity.
  std::optional<std::string> audit() const;

  nlohmann::json to_json() const;
  static Monoid from_json(const nlohmann::json& j);

 private:
  std::vector<std::string> names_;
  int identity_ = 0;
  std::vector<std::vector<int>> table_;
};

class Morphism {
 public:
  Morphism() = default;
  Morphism(std::shared_ptr<const Monoid> monoid, std::map<char, int> letters);

  const Monoid& monoid() const { return *monoid_; }
  std::shared_ptr<const Monoid> monoid_ptr() const { return monoid_; }
  const std::map<char, int>& letters() const { return letters_; }

  // Throws Error(UnknownName) on a letter outside the map.
  int letter(char a) const;
  int eval(std::string_view word) const;
  int eval(const Run& r) const;

  nlohmann::json to_json() const;
  static Morphism from_json(const nlohmann::json& j);

 private:
  std::shared_ptr<const Monoid> monoid_;
  std::map<char, int> letters_;
};

// {1, ne}: the empty word maps to 1, every other word to ne.
Morphism nonempty_morphism(std::string_view alphabet);

// One-element monoid.
Morphism trivial_morphism(std::string_view alphabet);

// {1, *+, x}: separates nonempty words of stars from words with another letter.
Morphism stars_only_morphism(std::string_view alphabet, char star = '*');

// Whether eval(w) determines if w consists only of stars.
bool detects_star_words(const Morphism& m, char star = '*');

// Z/m counting occurrences of `counted`.
Morphism counting_morphism(std::string_view alphabet, char counted, int m);

// Over {[,],*,#}: classes empty, #+, *+, *]* with one bracket, other.
Morphism star_sharp_bracket_morphism();

// Over {[,],*,#}: elements (contains #, bracket pattern up to `bound` or overflow).
inline constexpr int kPatternElementCap = 512;
Morphism pattern_morphism(int bound);

// Name of the pattern element reached by a word: "<flag>:<pattern>" or "<flag>:overflow".
std::string pattern_element_name(bool sharp, std::optional<std::string_view> pattern);

}  // namespace hopda
