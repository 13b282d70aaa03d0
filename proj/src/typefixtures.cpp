#include "hopda/typefixtures.hpp"

#include <cctype>

#include "hopda/fixtures.hpp"

namespace hopda {

TreeId TypeFixture::tree(const std::string& name) const {
  auto it = trees.find(name);
  if (it == trees.end()) throw Error(ErrorKind::UnknownName, "no tree named '" + name + "'");
  return it->second;
}

const AStack& TypeFixture::stack(const std::string& name) const {
  auto it = stacks.find(name);
  if (it == stacks.end()) throw Error(ErrorKind::UnknownName, "no annotated stack named '" + name + "'");
  return it->second;
}

std::map<TreeId, std::string> TypeFixture::tree_names() const {
  std::map<TreeId, std::string> out;
  for (const auto& [name, id] : trees) out.emplace(id, name);
  return out;
}

namespace {

class AStackParser {
 public:
  AStackParser(std::string_view s, const std::map<std::string, TreeId>& trees) : s_(s), trees_(trees) {}

  AStack parse(int order) {
    AStack out = item(order);
    skip();
    if (i_ != s_.size()) fail("trailing input");
    return out;
  }

 private:
  std::string_view s_;
  const std::map<std::string, TreeId>& trees_;
  std::size_t i_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::Parse, "annotated stack at offset " + std::to_string(i_) + ": " + what);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  void expect(char c) {
    skip();
    if (i_ >= s_.size() || s_[i_] != c) fail(std::string("expected '") + c + "'");
    ++i_;
  }
  bool peek(char c) {
    skip();
    return i_ < s_.size() && s_[i_] == c;
  }
  std::string word() {
    skip();
    std::string w;
    while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != ',' && s_[i_] != '}' &&
           s_[i_] != ')' && s_[i_] != '{')
      w += s_[i_++];
    if (w.empty()) fail("expected a name");
    return w;
  }
  AStack item(int order) {
    if (order == 0) {
      expect('(');
      const Symbol g = Symbol::intern(word());
      expect(',');
      expect('{');
      std::vector<TreeId> ids;
      while (!peek('}')) {
        const std::string name = word();
        auto it = trees_.find(name);
        if (it == trees_.end()) throw Error(ErrorKind::UnknownName, "no tree named '" + name + "'");
        ids.push_back(it->second);
        if (!peek('}')) expect(',');
      }
      expect('}');
      expect(')');
      // Keep duplicates visible to the well-formedness check.
      return AStack{0, g, std::move(ids), {}};
    }
    expect('[');
    std::vector<AStack> items;
    while (!peek(']')) {
      items.push_back(item(order - 1));
      if (!peek(']')) expect(',');
    }
    expect(']');
    return AStack::list(order, std::move(items));
  }
};

}  // namespace

AStack parse_astack(std::string_view text, const std::map<std::string, TreeId>& trees, int order) {
  return AStackParser(text, trees).parse(order);
}

TypeFixture a1_type_fixture() {
  TypeFixture f;
  f.ts = std::make_shared<TypeSystem>(fixture_automaton("a1"), nonempty_morphism("ab#"));
  TypeSystem& ts = *f.ts;
  auto& t = f.trees;
  t["E7"] = ts.parse_tree("(empty g q7)");
  t["E4"] = ts.parse_tree("(read q4 (empty g q7))");
  t["E3"] = ts.parse_tree("(pop g q3 (q4 () pr))");
  t["E1"] = ts.parse_tree("(empty g q1)");
  for (const char* q : {"5", "6", "7"})
    t[std::string("D") + q] = ts.parse_tree(std::string("(pop g q") + q + " (q3 pr))");
  t["D4#"] = ts.read_tree(ts.automaton().state_index("q4"), t["D7"]);
  t["D4a"] = ts.read_tree(ts.automaton().state_index("q4"), t["D5"]);
  t["D4b"] = ts.read_tree(ts.automaton().state_index("q4"), t["D6"]);
  for (const char* fl : {"pr", "np"})
    t[std::string("D3") + fl] = ts.parse_tree(std::string("(pop g q3 (q4 ((ne (q3 pr))) ") + fl + "))");
  const Symbol g = Symbol::intern("g");
  const int q1 = ts.automaton().state_index("q1");
  const int q2 = ts.automaton().state_index("q2");
  for (const char* a : {"pr", "np"})
    for (const char* b : {"pr", "np"})
      t[std::string("D2") + a + b] = ts.push_tree(g, q2, t[std::string("D3") + a], {t[std::string("D3") + b]});
  t["D1#a"] = ts.push_tree(g, q1, t["D2prnp"], {t["D4#"], t["D4a"]});
  t["D1aa"] = ts.push_tree(g, q1, t["D2npnp"], {t["D4a"]});

  const std::string base = "[(g,{E4}),(g,{E3})]";
  const std::pair<const char*, std::string> stacks[] = {
      {"s1", "[" + base + ",[(g,{}),(g,{D1#a})]]"},
      {"s2", "[" + base + ",[(g,{}),(g,{D4#,D4a}),(g,{D2prnp})]]"},
      {"s3", "[" + base + ",[(g,{E1}),(g,{D1#a})]]"},
      {"s4", "[" + base + ",[(g,{}),(g,{D4#,D4a,D4b}),(g,{D2prnp})]]"},
      {"s5", "[" + base + ",[(g,{}),(g,{D4#}),(g,{D2prnp})]]"},
  };
  for (const auto& [name, text] : stacks) f.stacks[name] = parse_astack(text, t, 2);
  return f;
}

TypeFixture a2_type_fixture() {
  TypeFixture f;
  f.ts = std::make_shared<TypeSystem>(fixture_automaton("a2"), trivial_morphism("#"));
  TypeSystem& ts = *f.ts;
  auto sigma = [](const char* q) { return std::string("(") + q + " ((1 (q6 pr))) pr)"; };
  f.trees["D1"] = ts.parse_tree("(push g q1 (pop g q2 " + sigma("q3") + ") ((pop g q6 " + sigma("q7") + ")))");
  f.trees["D3"] = ts.parse_tree("(pop g q3 " + sigma("q4") + ")");
  f.trees["D7"] = ts.parse_tree("(pop g q7 " + sigma("q4") + ")");
  f.trees["D4"] = ts.parse_tree("(read q4 (pop g q5 (q6 pr)))");
  f.stacks["a2"] = parse_astack("[(g,{D4}),(g,{D3,D7}),(g,{D1})]", f.trees, 1);
  return f;
}

std::vector<std::string> annotated_fixture_names() { return {"s1", "s2", "s3", "s4", "s5", "a2"}; }

TypeFixture annotated_fixture(std::string_view name) {
  if (name == "a2") return a2_type_fixture();
  for (const std::string& s : annotated_fixture_names())
    if (s == name) return a1_type_fixture();
  throw Error(ErrorKind::UnknownName, "no annotated fixture named '" + std::string(name) + "'");
}

}  // namespace hopda
