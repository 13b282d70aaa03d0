#pragma once

#include <cstddef>
#include <string_view>

#include "hopda/automaton.hpp"

namespace hopda {

// Stars before the last unmatched '['. Zero when some prefix over-closes or the
// brackets balance. Throws Error(Parse) on letters outside [ ] *.
std::size_t stars(std::string_view w);

// w = v #^(stars(v)+1) with v over [ ] *.
bool u_member(std::string_view w);

Automaton build_u_automaton();

}  // namespace hopda
