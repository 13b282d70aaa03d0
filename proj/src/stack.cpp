#include "hopda/stack.hpp"

#include <cctype>
#include <deque>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace hopda {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyPop: return "EmptyPop";
    case ErrorKind::CollapseUnsupported: return "CollapseUnsupported";
    case ErrorKind::OrderOutOfRange: return "OrderOutOfRange";
    case ErrorKind::EmptyLevel: return "EmptyLevel";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Injectivity: return "Injectivity";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::Precondition: return "Precondition";
    case ErrorKind::UnresolvableRef: return "UnresolvableRef";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::RuleMismatch: return "RuleMismatch";
    case ErrorKind::NotComposer: return "NotComposer";
    case ErrorKind::Overflow: return "Overflow";
  }
  return "?";
}

namespace {

struct SymbolTable {
  std::mutex mu;
  std::deque<std::string> names;
  std::unordered_map<std::string, std::uint32_t> ids;

  SymbolTable() {
    names.emplace_back("");
    ids.emplace("", 0);
  }
};

SymbolTable& symbols() {
  static SymbolTable table;
  return table;
}

}  // namespace

Symbol Symbol::intern(std::string_view name) {
  auto& t = symbols();
  std::lock_guard<std::mutex> lock(t.mu);
  auto it = t.ids.find(std::string(name));
  if (it != t.ids.end()) return Symbol(it->second);
  auto id = static_cast<std::uint32_t>(t.names.size());
  t.names.emplace_back(name);
  t.ids.emplace(std::string(name), id);
  return Symbol(id);
}

const std::string& Symbol::name() const {
  auto& t = symbols();
  std::lock_guard<std::mutex> lock(t.mu);
  return t.names[id_];
}

std::string Position::str() const {
  std::string out = "(";
  for (int j = n; j >= 1; --j) {
    out += std::to_string(get(j));
    if (j > 1) out += ",";
  }
  return out + ")";
}

std::string StackOp::str() const {
  switch (kind) {
    case OpKind::Push:
      return "push" + std::to_string(order) + " " + symbol.name();
    case OpKind::Pop:
      return "pop" + std::to_string(order);
    case OpKind::Collapse:
      return "collapse";
  }
  return "?";
}

// ---------------------------------------------------------------- Plain

namespace {

struct PlainParser {
  std::string_view text;
  std::size_t i = 0;

  void skip() {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw Error(ErrorKind::Parse,
                "stack literal: " + msg + " at offset " + std::to_string(i));
  }

  Plain parse() {
    skip();
    if (i >= text.size()) fail("unexpected end");
    if (text[i] == '[') {
      ++i;
      std::vector<Plain> items;
      skip();
      if (i < text.size() && text[i] == ']') {
        ++i;
        return Plain::list(-1, {});
      }
      for (;;) {
        items.push_back(parse());
        skip();
        if (i >= text.size()) fail("unterminated list");
        if (text[i] == ',') {
          ++i;
          continue;
        }
        if (text[i] == ']') {
          ++i;
          break;
        }
        fail("expected ',' or ']'");
      }
      int order = -1;
      for (const auto& it : items) {
        if (it.order < 0) fail("empty nested stack");
        int o = it.order + 1;
        if (order >= 0 && order != o) fail("mixed orders in list");
        order = o;
      }
      return Plain::list(order, std::move(items));
    }
    std::size_t start = i;
    while (i < text.size() && text[i] != ',' && text[i] != ']' && text[i] != '[' &&
           !std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
    if (start == i) fail("expected symbol");
    return Plain::cell(Symbol::intern(text.substr(start, i - start)));
  }
};

}  // namespace

Plain Plain::parse(std::string_view text) {
  PlainParser p{text};
  Plain out = p.parse();
  p.skip();
  if (p.i != text.size()) p.fail("trailing input");
  if (out.order < 0) throw Error(ErrorKind::Parse, "stack literal: order of [] is ambiguous");
  return out;
}

bool Plain::operator==(const Plain& o) const {
  if (order != o.order) return false;
  if (order == 0) return symbol == o.symbol;
  return items == o.items;
}

std::string Plain::str() const {
  if (order == 0) return symbol.name();
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    out += items[i].str();
  }
  return out + "]";
}

// ---------------------------------------------------------------- Stack

Stack Stack::leaf(const Cell& c) {
  Stack s;
  s.order_ = 0;
  s.size_ = 0;
  s.cell_ = std::make_shared<const Cell>(c);
  return s;
}

Stack Stack::empty(int order) {
  if (order < 1 || order > kMaxOrder)
    throw Error(ErrorKind::OrderOutOfRange, "empty stack of order " + std::to_string(order));
  Stack s;
  s.order_ = order;
  return s;
}

Stack Stack::from_items(int order, const std::vector<Stack>& items) {
  Stack s = empty(order);
  for (const auto& it : items) s = s.push_item(it);
  return s;
}

const Cell& Stack::cell() const {
  if (order_ != 0 || !cell_)
    throw Error(ErrorKind::OrderOutOfRange, "cell() on a stack of order " + std::to_string(order_));
  return *cell_;
}

const Stack& Stack::top_item() const {
  if (order_ == 0) throw Error(ErrorKind::OrderOutOfRange, "top_item() on a 0-stack");
  if (!top_) throw Error(ErrorKind::EmptyLevel, "top_item() on an empty stack");
  return top_->head;
}

Stack Stack::pop_item() const {
  if (order_ == 0) throw Error(ErrorKind::OrderOutOfRange, "pop_item() on a 0-stack");
  if (!top_) throw Error(ErrorKind::EmptyLevel, "pop_item() on an empty stack");
  Stack s = *this;
  s.top_ = top_->rest;
  s.size_ = size_ - 1;
  return s;
}

Stack Stack::push_item(const Stack& item) const {
  if (order_ == 0) throw Error(ErrorKind::OrderOutOfRange, "push_item() on a 0-stack");
  if (item.order_ != order_ - 1)
    throw Error(ErrorKind::OrderOutOfRange, "push_item() order mismatch");
  if (item.is_empty()) throw Error(ErrorKind::EmptyLevel, "nested stacks must be nonempty");
  Stack s = *this;
  s.top_ = std::make_shared<const Node>(Node{item, top_});
  s.size_ = size_ + 1;
  return s;
}

std::vector<Stack> Stack::items() const {
  std::vector<Stack> out;
  out.reserve(size_);
  for (const Node* n = top_.get(); n; n = n->rest.get()) out.push_back(n->head);
  return {out.rbegin(), out.rend()};
}

bool Stack::same_node(const Stack& o) const {
  return order_ == o.order_ && cell_ == o.cell_ && top_ == o.top_;
}

// ---------------------------------------------------------------- operations

Stack initial_stack(int order, Symbol symbol) {
  if (order < 1 || order > kMaxOrder)
    throw Error(ErrorKind::OrderOutOfRange, "initial_stack: order must be in 1.." +
                                                std::to_string(kMaxOrder));
  Cell c;
  c.symbol = symbol;
  c.pos.n = order;
  for (int j = 1; j <= order; ++j) c.pos.set(j, 1);
  c.link = 1;
  Stack s = Stack::leaf(c);
  for (int k = 1; k <= order; ++k) s = Stack::empty(k).push_item(s);
  return s;
}

const Stack& top(int k, const Stack& s) {
  if (k < 0 || k > s.order())
    throw Error(ErrorKind::OrderOutOfRange, "top: order " + std::to_string(k) +
                                                " exceeds stack order " + std::to_string(s.order()));
  const Stack* cur = &s;
  while (cur->order() > k) cur = &cur->top_item();
  return *cur;
}

const Cell& top_cell(const Stack& s) { return top(0, s).cell(); }

Stack replace_top(const Stack& s, int k, const Stack& replacement) {
  if (s.order() == k) return replacement;
  return s.pop_item().push_item(replace_top(s.top_item(), k, replacement));
}

namespace {

Stack shift_copy(const Stack& s, int k, bool set_top, Symbol top_symbol) {
  if (s.order() == 0) {
    Cell c = s.cell();
    c.pos.set(k, c.pos.get(k) + 1);
    if (set_top) c.symbol = top_symbol;
    return Stack::leaf(c);
  }
  auto items = s.items();
  Stack out = Stack::empty(s.order());
  for (std::size_t i = 0; i < items.size(); ++i) {
    bool is_top = set_top && i + 1 == items.size();
    out = out.push_item(shift_copy(items[i], k, is_top, top_symbol));
  }
  return out;
}

std::optional<Stack> apply_impl(const StackOp& op, const Stack& s, bool collapse_mode) {
  const int n = s.order();
  if (n < 1) throw Error(ErrorKind::OrderOutOfRange, "apply: stack order must be >= 1");
  switch (op.kind) {
    case OpKind::Push: {
      const int k = op.order;
      if (k < 1 || k > n)
        throw Error(ErrorKind::OrderOutOfRange, "apply: push order " + std::to_string(k));
      const Stack& tk = top(k, s);
      Stack copy = shift_copy(tk.top_item(), k, true, op.symbol);
      if (k == 1 && collapse_mode) {
        Cell c = copy.cell();
        c.link = static_cast<std::uint32_t>(top(2, s).size());
        copy = Stack::leaf(c);
      }
      return replace_top(s, k, tk.push_item(copy));
    }
    case OpKind::Pop: {
      const int k = op.order;
      if (k < 1 || k > n)
        throw Error(ErrorKind::OrderOutOfRange, "apply: pop order " + std::to_string(k));
      const Stack& tk = top(k, s);
      if (tk.size() <= 1) return std::nullopt;
      return replace_top(s, k, tk.pop_item());
    }
    case OpKind::Collapse: {
      if (!collapse_mode || n != 2)
        throw Error(ErrorKind::CollapseUnsupported, "collapse requires an order-2 stack in collapse mode");
      std::uint32_t keep = top_cell(s).link - 1;
      if (keep < 1) return std::nullopt;
      Stack out = s;
      while (out.size() > keep) out = out.pop_item();
      return out;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Stack> try_apply(const StackOp& op, const Stack& s, bool collapse_mode) {
  return apply_impl(op, s, collapse_mode);
}

Stack apply(const StackOp& op, const Stack& s, bool collapse_mode) {
  auto r = apply_impl(op, s, collapse_mode);
  if (!r) throw Error(ErrorKind::EmptyPop, "apply: " + op.str() + " is blocked");
  return *r;
}

Plain positionless(const Stack& s) {
  if (s.order() == 0) return Plain::cell(s.cell().symbol);
  std::vector<Plain> items;
  for (const auto& it : s.items()) items.push_back(positionless(it));
  return Plain::list(s.order(), std::move(items));
}

namespace {

Stack attach(const Plain& p, Position prefix, int n) {
  if (p.order == 0) {
    Cell c;
    c.symbol = p.symbol;
    c.pos = prefix;
    c.link = 1;
    return Stack::leaf(c);
  }
  Stack out = Stack::empty(p.order);
  for (std::size_t i = 0; i < p.items.size(); ++i) {
    Position q = prefix;
    q.set(p.order, static_cast<std::uint32_t>(i + 1));
    out = out.push_item(attach(p.items[i], q, n));
  }
  return out;
}

}  // namespace

Stack pos_plus(const Plain& p, int ambient_order) {
  if (ambient_order < p.order || ambient_order > kMaxOrder)
    throw Error(ErrorKind::OrderOutOfRange, "pos_plus: bad ambient order");
  Position base;
  base.n = ambient_order;
  for (int j = 1; j <= ambient_order; ++j) base.set(j, 1);
  return attach(p, base, ambient_order);
}

Stack pos_plus(const Plain& p) { return pos_plus(p, p.order); }

bool congruent(const Stack& a, const Stack& b) { return positionless(a) == positionless(b); }

namespace {

std::optional<std::string> check(const Stack& s, const Position& prefix, int n, bool nested) {
  if (s.order() == 0) {
    const Cell& c = s.cell();
    if (c.pos.n != n) return "cell " + c.symbol.name() + " has position length " + std::to_string(c.pos.n);
    for (int j = n; j >= 1; --j) {
      if (c.pos.get(j) != prefix.get(j))
        return "cell " + c.symbol.name() + " at " + c.pos.str() + " expected " + prefix.str();
    }
    return std::nullopt;
  }
  if (nested && s.is_empty()) return "empty " + std::to_string(s.order()) + "-stack nested at prefix " + prefix.str();
  auto items = s.items();
  for (std::size_t i = 0; i < items.size(); ++i) {
    Position q = prefix;
    q.set(s.order(), static_cast<std::uint32_t>(i + 1));
    if (auto r = check(items[i], q, n, true)) return r;
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> validate(const Stack& s) {
  Position base;
  base.n = s.order();
  for (int j = 1; j <= s.order(); ++j) base.set(j, 1);
  return check(s, base, s.order(), false);
}

std::string render(const Stack& s) { return positionless(s).str(); }

std::string render_with_positions(const Stack& s, bool with_links) {
  if (s.order() == 0) {
    const Cell& c = s.cell();
    std::string out = "(" + c.symbol.name() + "," + c.pos.str();
    if (with_links) out += "," + std::to_string(c.link);
    return out + ")";
  }
  std::string out = "[";
  auto items = s.items();
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    out += render_with_positions(items[i], with_links);
  }
  return out + "]";
}

}  // namespace hopda
