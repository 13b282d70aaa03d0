#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "hopda/annotated.hpp"

namespace hopda {

// A type system over a fixture automaton with named derivation trees and
// named annotated stacks built from them.
struct TypeFixture {
  std::shared_ptr<TypeSystem> ts;
  std::map<std::string, TreeId> trees;
  std::map<std::string, AStack> stacks;

  TreeId tree(const std::string& name) const;
  const AStack& stack(const std::string& name) const;
  std::map<TreeId, std::string> tree_names() const;
};

// A1 with the monoid {1, ne}. Trees E1 E3 E4 E7 D5 D6 D7 D4# D4a D4b D3pr
// D3np D2xy (x, y in {pr, np}) D1#a D1aa; stacks s1 .. s5.
TypeFixture a1_type_fixture();
// A2 with the trivial monoid. Trees D1 D3 D4 D7; the 1-stack "a2".
TypeFixture a2_type_fixture();

// Names accepted by annotated_fixture: s1 .. s5 and a2.
std::vector<std::string> annotated_fixture_names();
// The fixture that owns the named stack.
TypeFixture annotated_fixture(std::string_view name);

// Parses "[[(g,{E4}),(g,{E3})],[(g,{}),(g,{D1#a})]]" with trees looked up by
// name; order is the order of the whole stack.
AStack parse_astack(std::string_view text, const std::map<std::string, TreeId>& trees, int order);

}  // namespace hopda
