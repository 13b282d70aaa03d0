#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hopda/automaton.hpp"

namespace hopda {

// Automaton sources shipped under data/: u, table1, a1, a2, loop3, anbn, mix3.
std::vector<std::string> fixture_automaton_names();
std::string_view fixture_source(std::string_view name);
Automaton fixture_automaton(std::string_view name);

}  // namespace hopda
