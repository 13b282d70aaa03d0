#include "hopda/monoid.hpp"

#include <set>
#include <unordered_map>

#include "hopda/automaton.hpp"
#include "hopda/error.hpp"

namespace hopda {

Monoid::Monoid(std::vector<std::string> names, int identity, std::vector<std::vector<int>> table)
    : names_(std::move(names)), identity_(identity), table_(std::move(table)) {}

int Monoid::index_of(std::string_view name) const {
  for (int i = 0; i < size(); ++i)
    if (names_[i] == name) return i;
  return -1;
}

std::optional<std::string> Monoid::audit() const {
  const int n = size();
  if (n == 0) return "no elements";
  if (identity_ < 0 || identity_ >= n) return "identity out of range";
  if (static_cast<int>(table_.size()) != n) return "table has wrong number of rows";
  for (const auto& row : table_) {
    if (static_cast<int>(row.size()) != n) return "table row has wrong length";
    for (int v : row)
      if (v < 0 || v >= n) return "table entry out of range";
  }
  for (int a = 0; a < n; ++a)
    if (table_[identity_][a] != a || table_[a][identity_] != a)
      return "identity law fails at " + names_[a];
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const int ab = table_[a][b];
      for (int c = 0; c < n; ++c)
        if (table_[ab][c] != table_[a][table_[b][c]])
          return "associativity fails at (" + names_[a] + "," + names_[b] + "," + names_[c] + ")";
    }
  return std::nullopt;
}

nlohmann::json Monoid::to_json() const {
  return {{"elements", names_}, {"identity", identity_}, {"table", table_}};
}

Monoid Monoid::from_json(const nlohmann::json& j) {
  Monoid m(j.at("elements").get<std::vector<std::string>>(), j.at("identity").get<int>(),
           j.at("table").get<std::vector<std::vector<int>>>());
  if (auto bad = m.audit()) throw Error(ErrorKind::Parse, "monoid table: " + *bad);
  return m;
}

Morphism::Morphism(std::shared_ptr<const Monoid> monoid, std::map<char, int> letters)
    : monoid_(std::move(monoid)), letters_(std::move(letters)) {
  for (auto [c, e] : letters_)
    if (e < 0 || e >= monoid_->size())
      throw Error(ErrorKind::Precondition, std::string("letter image out of range for '") + c + "'");
}

int Morphism::letter(char a) const {
  auto it = letters_.find(a);
  if (it == letters_.end())
    throw Error(ErrorKind::UnknownName, std::string("letter '") + a + "' not in the morphism");
  return it->second;
}

int Morphism::eval(std::string_view word) const {
  int e = monoid_->identity();
  for (char a : word) e = monoid_->mul(e, letter(a));
  return e;
}

int Morphism::eval(const Run& r) const { return eval(r.word()); }

nlohmann::json Morphism::to_json() const {
  nlohmann::json letters = nlohmann::json::object();
  for (auto [c, e] : letters_) letters[std::string(1, c)] = monoid_->name(e);
  return {{"monoid", monoid_->to_json()}, {"letters", letters}};
}

Morphism Morphism::from_json(const nlohmann::json& j) {
  auto m = std::make_shared<const Monoid>(Monoid::from_json(j.at("monoid")));
  std::map<char, int> letters;
  for (auto& [k, v] : j.at("letters").items()) {
    if (k.size() != 1) throw Error(ErrorKind::Parse, "morphism letter must be one character");
    int e = m->index_of(v.get<std::string>());
    if (e < 0) throw Error(ErrorKind::UnknownName, "unknown monoid element " + v.get<std::string>());
    letters[k[0]] = e;
  }
  return Morphism(std::move(m), std::move(letters));
}

namespace {

std::map<char, int> constant_letters(std::string_view alphabet, int e) {
  std::map<char, int> out;
  for (char a : alphabet) out[a] = e;
  return out;
}

}  // namespace

Morphism nonempty_morphism(std::string_view alphabet) {
  auto m = std::make_shared<const Monoid>(std::vector<std::string>{"1", "ne"}, 0,
                                          std::vector<std::vector<int>>{{0, 1}, {1, 1}});
  return Morphism(m, constant_letters(alphabet, 1));
}

Morphism trivial_morphism(std::string_view alphabet) {
  auto m = std::make_shared<const Monoid>(std::vector<std::string>{"1"}, 0,
                                          std::vector<std::vector<int>>{{0}});
  return Morphism(m, constant_letters(alphabet, 0));
}

Morphism stars_only_morphism(std::string_view alphabet, char star) {
  auto m = std::make_shared<const Monoid>(std::vector<std::string>{"1", "*+", "x"}, 0,
                                          std::vector<std::vector<int>>{{0, 1, 2}, {1, 1, 2}, {2, 2, 2}});
  auto letters = constant_letters(alphabet, 2);
  letters[star] = 1;
  return Morphism(m, letters);
}

bool detects_star_words(const Morphism& m, char star) {
  const Monoid& mon = m.monoid();
  // Elements of star-only words, then elements of words with another letter.
  std::set<int> stars{mon.identity()};
  if (m.letters().count(star)) {
    for (int e = m.letter(star); stars.insert(e).second;) e = mon.mul(e, m.letter(star));
  }
  std::set<int> all{mon.identity()};
  for (bool grown = true; grown;) {
    grown = false;
    for (int e : std::set<int>(all))
      for (const auto& [a, x] : m.letters()) grown = all.insert(mon.mul(e, x)).second || grown;
  }
  std::set<int> other;
  for (int e : all)
    for (const auto& [a, x] : m.letters())
      if (a != star)
        for (int f : all) other.insert(mon.mul(mon.mul(e, x), f));
  for (int e : other)
    if (stars.count(e)) return false;
  return true;
}

Morphism counting_morphism(std::string_view alphabet, char counted, int m) {
  if (m < 1) throw Error(ErrorKind::Precondition, "counting modulus must be positive");
  std::vector<std::string> names;
  std::vector<std::vector<int>> table(m, std::vector<int>(m));
  for (int a = 0; a < m; ++a) {
    names.push_back(std::to_string(a));
    for (int b = 0; b < m; ++b) table[a][b] = (a + b) % m;
  }
  auto letters = constant_letters(alphabet, 0);
  letters[counted] = 1 % m;
  return Morphism(std::make_shared<const Monoid>(names, 0, table), letters);
}

Morphism star_sharp_bracket_morphism() {
  enum { E, S, T, B, O };
  // S: #+   T: *+   B: *]* with exactly one ]   O: everything else
  std::vector<std::vector<int>> table = {
      //  E  S  T  B  O
      {E, S, T, B, O},  // E
      {S, S, O, O, O},  // S
      {T, O, T, B, O},  // T
      {B, O, B, O, O},  // B
      {O, O, O, O, O},  // O
  };
  auto m = std::make_shared<const Monoid>(
      std::vector<std::string>{"empty", "sharps", "stars", "star-bracket", "other"}, E, table);
  return Morphism(m, {{'#', S}, {'*', T}, {']', B}, {'[', O}});
}

std::string pattern_element_name(bool sharp, std::optional<std::string_view> pattern) {
  std::string out = sharp ? "#:" : "-:";
  out += pattern ? std::string(*pattern) : std::string("overflow");
  return out;
}

Morphism pattern_morphism(int bound) {
  if (bound < 0) throw Error(ErrorKind::Precondition, "pattern bound must be nonnegative");
  // 2 * (2^(bound+1) - 1 patterns + overflow)
  if (bound > 20 || 2 * ((1 << (bound + 1)) - 1 + 1) > kPatternElementCap)
    throw Error(ErrorKind::BudgetExceeded,
                "pattern morphism with bound " + std::to_string(bound) + " exceeds the element cap");

  std::vector<std::string> patterns{""};
  for (std::size_t i = 0; i < patterns.size(); ++i)
    if (static_cast<int>(patterns[i].size()) < bound) {
      patterns.push_back(patterns[i] + "[");
      patterns.push_back(patterns[i] + "]");
    }
  const int p = static_cast<int>(patterns.size());
  const int overflow = p;
  std::unordered_map<std::string, int> index;
  for (int i = 0; i < p; ++i) index[patterns[i]] = i;

  // Element e encodes (flag, pattern id) as flag * (p + 1) + id.
  const int n = 2 * (p + 1);
  std::vector<std::string> names(n);
  for (int flag = 0; flag < 2; ++flag)
    for (int id = 0; id <= p; ++id)
      names[flag * (p + 1) + id] =
          pattern_element_name(flag == 1, id == overflow ? std::nullopt
                                                          : std::optional<std::string_view>(patterns[id]));

  auto concat = [&](int x, int y) {
    if (x == overflow || y == overflow) return overflow;
    const std::string& a = patterns[x];
    const std::string& b = patterns[y];
    if (static_cast<int>(a.size() + b.size()) > bound) return overflow;
    return index.at(a + b);
  };
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const int flag = (a / (p + 1)) | (b / (p + 1));
      table[a][b] = flag * (p + 1) + concat(a % (p + 1), b % (p + 1));
    }

  auto m = std::make_shared<const Monoid>(names, 0, table);
  std::map<char, int> letters;
  letters['*'] = 0;
  letters['#'] = (p + 1);
  letters['['] = bound >= 1 ? index.at("[") : overflow;
  letters[']'] = bound >= 1 ? index.at("]") : overflow;
  return Morphism(m, letters);
}

}  // namespace hopda
