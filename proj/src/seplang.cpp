#include "hopda/seplang.hpp"

#include "hopda/fixtures.hpp"

namespace hopda {

std::size_t stars(std::string_view w) {
  std::size_t seen = 0;
  std::vector<std::size_t> open;  // star count at each unmatched '['
  bool over_closed = false;
  for (char c : w) {
    switch (c) {
      case '*': ++seen; break;
      case '[': open.push_back(seen); break;
      case ']':
        if (open.empty()) over_closed = true;
        else open.pop_back();
        break;
      default:
        throw Error(ErrorKind::Parse, std::string("stars: illegal letter '") + c + "'");
    }
  }
  if (over_closed || open.empty()) return 0;
  return open.back();
}

bool u_member(std::string_view w) {
  std::size_t cut = w.find('#');
  if (cut == std::string_view::npos) return false;
  std::string_view v = w.substr(0, cut);
  std::string_view tail = w.substr(cut);
  for (char c : v)
    if (c != '[' && c != ']' && c != '*') return false;
  for (char c : tail)
    if (c != '#') return false;
  return tail.size() == stars(v) + 1;
}

Automaton build_u_automaton() { return fixture_automaton("u"); }

}  // namespace hopda
