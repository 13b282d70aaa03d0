#include <doctest.h>

#include <random>

#include "hopda/automaton.hpp"
#include "hopda/stack.hpp"

using namespace hopda;

namespace {

Symbol sym(const char* s) { return Symbol::intern(s); }

}  // namespace

TEST_CASE("initial stack has unit positions") {
  Stack s = initial_stack(2, sym("X"));
  CHECK(render_with_positions(s) == "[[(X,(1,1))]]");
  Stack t = initial_stack(3, sym("a"));
  CHECK(render_with_positions(t) == "[[[(a,(1,1,1))]]]");
  CHECK_THROWS_AS(initial_stack(0, sym("X")), Error);
}

TEST_CASE("push2 duplicates the top 1-stack and rewrites its top symbol") {
  Stack s = pos_plus(Plain::parse("[[a,b],[c,d]]"));
  Stack t = apply(StackOp::push(2, sym("e")), s);
  CHECK(render(t) == "[[a,b],[c,d],[c,e]]");
  CHECK(render_with_positions(t) ==
        "[[(a,(1,1)),(b,(1,2))],[(c,(2,1)),(d,(2,2))],[(c,(3,1)),(e,(3,2))]]");
}

TEST_CASE("push1 increments the last coordinate") {
  Stack s = pos_plus(Plain::parse("[[g],[g,g,g]]"));
  Stack t = apply(StackOp::push(1, sym("g")), s);
  CHECK(top_cell(t).pos.str() == "(2,4)");
}

TEST_CASE("pop on a singleton level is blocked") {
  Stack s = pos_plus(Plain::parse("[[a]]"));
  CHECK_THROWS_AS(apply(StackOp::pop(1), s), Error);
  CHECK_FALSE(try_apply(StackOp::pop(2), s).has_value());
  try {
    apply(StackOp::pop(1), s);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyPop);
  }
}

TEST_CASE("collapse keeps link-1 one-stacks") {
  // Push Y while the 2-stack has size 2 (link 2), then copy it twice.
  Stack s = pos_plus(Plain::parse("[[X],[X]]"));
  s = apply(StackOp::push(1, sym("Y")), s, true);
  CHECK(top_cell(s).link == 2);
  s = apply(StackOp::push(2, sym("Y")), s, true);
  s = apply(StackOp::push(2, sym("Y")), s, true);
  CHECK(s.size() == 4);
  Stack c = apply(StackOp::collapse(), s, true);
  CHECK(c.size() == 1);
  CHECK(render(c) == "[[X]]");
  CHECK_THROWS_AS(apply(StackOp::collapse(), s, false), Error);
}

TEST_CASE("collapse with link 1 is blocked") {
  Stack s = initial_stack(2, sym("X"));
  CHECK_FALSE(try_apply(StackOp::collapse(), s, true).has_value());
}

TEST_CASE("top extracts nested stacks") {
  Stack s = pos_plus(Plain::parse("[[a,b],[c,d]]"));
  CHECK(render(top(1, s)) == "[c,d]");
  CHECK(render_with_positions(top(0, s)) == "(d,(2,2))");
  CHECK(top(2, s).same_node(s));
}

TEST_CASE("positionless erasure and congruence") {
  Stack s = pos_plus(Plain::parse("[[a,b]]"));
  CHECK(positionless(s).str() == "[[a,b]]");
  Stack t = apply(StackOp::push(2, sym("b")), s);
  auto items = t.items();
  CHECK(congruent(items[0], items[1]));
  CHECK_FALSE(same_stack(items[0], items[1]));
  CHECK(render_with_positions(pos_plus(Plain::parse("[[a]]"))) == "[[(a,(1,1))]]");
}

TEST_CASE("validate flags incoherent positions and empty substacks") {
  Cell a{sym("a"), {}, 1};
  a.pos.n = 2;
  a.pos.set(2, 1);
  a.pos.set(1, 1);
  Cell b = a;  // duplicated index 1 in the second slot
  Stack one = Stack::from_items(1, {Stack::leaf(a), Stack::leaf(b)});
  Stack bad = Stack::from_items(2, {one});
  CHECK(validate(bad).has_value());
  CHECK_FALSE(validate(pos_plus(Plain::parse("[[a,b],[c]]"))).has_value());
  CHECK_THROWS_AS(Stack::empty(2).push_item(Stack::empty(1)), Error);
}

TEST_CASE("random operation chains stay valid and position-derivable") {
  std::mt19937 rng(7);
  const Symbol syms[] = {sym("a"), sym("b"), sym("c")};
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 3;
    Stack s = initial_stack(n, syms[0]);
    for (int i = 0; i < 40; ++i) {
      int k = 1 + static_cast<int>(rng() % n);
      StackOp op = (rng() % 2) ? StackOp::push(k, syms[rng() % 3]) : StackOp::pop(k);
      auto next = try_apply(op, s);
      if (!next) continue;
      REQUIRE_FALSE(validate(*next).has_value());
      // Positions are determined by the positionless content.
      CHECK(same_stack(*next, pos_plus(positionless(*next))));
      if (op.kind == OpKind::Push) {
        // pop undoes push exactly, positions included.
        Stack back = apply(StackOp::pop(k), *next);
        CHECK(same_stack(top(k, back), top(k, s)));
        // The pushed copy sits one above its source in coordinate k.
        CHECK(top_cell(*next).pos.get(k) == top_cell(s).pos.get(k) + 1);
      }
      s = *next;
    }
  }
}
