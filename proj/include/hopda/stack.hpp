#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hopda/error.hpp"

namespace hopda {

inline constexpr int kMaxOrder = 8;

// Interned stack symbol. Ids are process-wide and never recycled.
class Symbol {
 public:
  Symbol() = default;
  static Symbol intern(std::string_view name);

  const std::string& name() const;
  std::uint32_t id() const { return id_; }

  friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }
  friend auto operator<=>(Symbol a, Symbol b) { return a.id_ <=> b.id_; }

 private:
  explicit Symbol(std::uint32_t id) : id_(id) {}
  std::uint32_t id_ = 0;
};

// Coordinates (x_n, ..., x_1); x_j is stored at index j - 1.
struct Position {
  int n = 0;
  std::array<std::uint32_t, kMaxOrder> x{};

  std::uint32_t get(int j) const { return x[j - 1]; }
  void set(int j, std::uint32_t v) { x[j - 1] = v; }

  bool operator==(const Position& o) const = default;
  std::string str() const;
};

struct Cell {
  Symbol symbol;
  Position pos;
  std::uint32_t link = 1;
};

enum class OpKind { Push, Pop, Collapse };

struct StackOp {
  OpKind kind = OpKind::Pop;
  int order = 1;
  Symbol symbol;

  static StackOp push(int k, Symbol s) { return {OpKind::Push, k, s}; }
  static StackOp pop(int k) { return {OpKind::Pop, k, Symbol{}}; }
  static StackOp collapse() { return {OpKind::Collapse, 2, Symbol{}}; }

  bool operator==(const StackOp& o) const {
    return kind == o.kind && order == o.order &&
           (kind != OpKind::Push || symbol == o.symbol);
  }
  std::string str() const;
};

// Positionless view: a 0-stack is a symbol, a k-stack a list of (k-1)-stacks.
struct Plain {
  int order = 0;
  Symbol symbol;
  std::vector<Plain> items;

  static Plain cell(Symbol s) { return Plain{0, s, {}}; }
  static Plain list(int order, std::vector<Plain> items) {
    return Plain{order, Symbol{}, std::move(items)};
  }
  // Parses "[[a,b],[c]]"; a bare name is a 0-stack.
  static Plain parse(std::string_view text);

  bool operator==(const Plain& o) const;
  std::string str() const;
};

// Immutable order-k stack. Substacks are shared between versions.
class Stack {
 public:
  Stack() = default;
  static Stack leaf(const Cell& c);
  static Stack empty(int order);
  static Stack from_items(int order, const std::vector<Stack>& items);

  int order() const { return order_; }
  std::size_t size() const { return size_; }
  bool is_empty() const { return order_ > 0 && size_ == 0; }

  const Cell& cell() const;
  const Stack& top_item() const;
  Stack pop_item() const;
  Stack push_item(const Stack& s) const;
  std::vector<Stack> items() const;  // bottom to top

  bool same_node(const Stack& o) const;

 private:
  struct Node;
  int order_ = 0;
  std::size_t size_ = 0;
  std::shared_ptr<const Cell> cell_;
  std::shared_ptr<const Node> top_;
};

struct Stack::Node {
  Stack head;
  std::shared_ptr<const Node> rest;
};

// Order-n stack with a single 0-stack at (1,...,1).
Stack initial_stack(int order, Symbol symbol);

// Applies op to an n-stack. Throws Error(EmptyPop) on a blocked pop or
// collapse, Error(CollapseUnsupported) for collapse outside order-2 collapse
// mode.
Stack apply(const StackOp& op, const Stack& s, bool collapse_mode = false);

// Non-throwing variant; nullopt when the operation is blocked.
std::optional<Stack> try_apply(const StackOp& op, const Stack& s,
                               bool collapse_mode = false);

const Stack& top(int k, const Stack& s);
Stack replace_top(const Stack& s, int k, const Stack& replacement);
const Cell& top_cell(const Stack& s);

Plain positionless(const Stack& s);
Stack pos_plus(const Plain& p);
Stack pos_plus(const Plain& p, int ambient_order);
bool congruent(const Stack& a, const Stack& b);

// nullopt when the stack satisfies the position and nonemptiness invariants.
std::optional<std::string> validate(const Stack& s);

std::string render(const Stack& s);
std::string render_with_positions(const Stack& s, bool with_links = false);

}  // namespace hopda
