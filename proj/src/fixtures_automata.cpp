#include "hopda/fixtures.hpp"

#include "fixture_sources.hpp"

namespace hopda {

namespace {

struct Entry {
  const char* name;
  const char* source;
};

const Entry kEntries[] = {
    {"u", fixture_src::u},         {"table1", fixture_src::table1}, {"a1", fixture_src::a1},
    {"a2", fixture_src::a2},       {"loop3", fixture_src::loop3},   {"anbn", fixture_src::anbn},
    {"mix3", fixture_src::mix3},
};

}  // namespace

std::vector<std::string> fixture_automaton_names() {
  std::vector<std::string> out;
  for (const auto& e : kEntries) out.emplace_back(e.name);
  return out;
}

std::string_view fixture_source(std::string_view name) {
  for (const auto& e : kEntries)
    if (name == e.name) return e.source;
  throw Error(ErrorKind::UnknownName, "no automaton fixture named '" + std::string(name) + "'");
}

Automaton fixture_automaton(std::string_view name) { return parse_automaton(fixture_source(name)); }

}  // namespace hopda
