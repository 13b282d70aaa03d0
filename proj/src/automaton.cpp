#include "hopda/automaton.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace hopda {

// ---------------------------------------------------------------- Automaton

int Automaton::add_state(const std::string& name) {
  int q = state_index(name);
  if (q >= 0) return q;
  states.push_back(name);
  accepting.push_back(false);
  return static_cast<int>(states.size()) - 1;
}

int Automaton::state_index(std::string_view name) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i] == name) return static_cast<int>(i);
  return -1;
}

bool Automaton::has_letter(char a) const {
  return std::find(input.begin(), input.end(), a) != input.end();
}

bool Automaton::has_symbol(Symbol s) const {
  return std::find(stack_alphabet.begin(), stack_alphabet.end(), s) != stack_alphabet.end();
}

void Automaton::set(int state, Symbol symbol, Transition t) { delta_[key(state, symbol)] = std::move(t); }

const Transition* Automaton::delta(int state, Symbol symbol) const {
  auto it = delta_.find(key(state, symbol));
  return it == delta_.end() ? nullptr : &it->second;
}

std::vector<std::pair<std::pair<int, Symbol>, const Transition*>> Automaton::transitions() const {
  std::vector<std::pair<std::pair<int, Symbol>, const Transition*>> out;
  for (int q = 0; q < static_cast<int>(states.size()); ++q)
    for (Symbol s : stack_alphabet)
      if (const Transition* t = delta(q, s)) out.push_back({{q, s}, t});
  return out;
}

void Automaton::check() const {
  if (order < 1 || order > kMaxOrder)
    throw Error(ErrorKind::OrderOutOfRange, "automaton order " + std::to_string(order));
  if (states.empty()) throw Error(ErrorKind::Parse, "automaton has no states");
  if (init_state < 0 || init_state >= static_cast<int>(states.size()))
    throw Error(ErrorKind::UnknownName, "initial state out of range");
  if (!has_symbol(init_symbol))
    throw Error(ErrorKind::UnknownName, "initial symbol not in the stack alphabet");
  if (init_stack) {
    if (init_stack->order != order)
      throw Error(ErrorKind::OrderOutOfRange, "init-stack order differs from automaton order");
    std::vector<const Plain*> todo{&*init_stack};
    while (!todo.empty()) {
      const Plain* p = todo.back();
      todo.pop_back();
      if (p->order == 0) {
        if (!has_symbol(p->symbol))
          throw Error(ErrorKind::UnknownName, "init-stack symbol '" + p->symbol.name() + "' not in the stack alphabet");
      } else {
        if (p->items.empty()) throw Error(ErrorKind::EmptyLevel, "init-stack contains an empty stack");
        for (const auto& it : p->items) todo.push_back(&it);
      }
    }
  }
  if (mode == Mode::Collapse && order != 2)
    throw Error(ErrorKind::CollapseUnsupported, "collapse mode requires order 2");
  for (const auto& [key, t] : transitions()) {
    const std::string where = "transition " + states[key.first] + " " + key.second.name();
    if (t->is_read) {
      std::set<int> targets;
      for (const auto& [letter, q] : t->read) {
        if (!has_letter(letter))
          throw Error(ErrorKind::UnknownName, where + ": letter '" + std::string(1, letter) + "' not in input");
        if (q < 0 || q >= static_cast<int>(states.size()))
          throw Error(ErrorKind::UnknownName, where + ": target out of range");
        if (!targets.insert(q).second)
          throw Error(ErrorKind::Injectivity, where + ": read map is not injective");
      }
      continue;
    }
    if (t->target < 0 || t->target >= static_cast<int>(states.size()))
      throw Error(ErrorKind::UnknownName, where + ": target out of range");
    const StackOp& op = t->op;
    if (op.kind == OpKind::Collapse) {
      if (mode != Mode::Collapse)
        throw Error(ErrorKind::CollapseUnsupported, where + ": collapse in plain mode");
      continue;
    }
    if (op.order < 1 || op.order > order)
      throw Error(ErrorKind::OrderOutOfRange, where + ": operation order " + std::to_string(op.order));
    if (op.kind == OpKind::Push && !has_symbol(op.symbol))
      throw Error(ErrorKind::UnknownName, where + ": push symbol not in the stack alphabet");
  }
}

// ---------------------------------------------------------------- parsing

namespace {

struct LineParser {
  std::string_view s;
  std::size_t i = 0;
  int line = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + msg);
  }
  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool done() {
    skip();
    return i >= s.size();
  }
  bool accept(std::string_view tok) {
    skip();
    if (s.substr(i, tok.size()) == tok) {
      i += tok.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }
  std::string word() {
    skip();
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != ',' &&
           s[i] != '{' && s[i] != '}' && s[i] != ':')
      ++i;
    if (start == i) fail("expected a name");
    return std::string(s.substr(start, i - start));
  }
  char letter() {
    skip();
    if (i + 2 < s.size() && s[i] == '\'' && s[i + 2] == '\'') {
      char c = s[i + 1];
      i += 3;
      return c;
    }
    fail("expected a quoted letter like '#'");
  }
};

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\'') quoted = !quoted;
    if (line[i] == ';' && !quoted) return line.substr(0, i);
  }
  return line;
}

}  // namespace

Automaton parse_automaton(std::string_view text) {
  Automaton a;
  bool have_order = false, have_init_state = false, have_init_symbol = false;
  std::string init_state_name;
  std::vector<std::string> accepting_names;
  struct PendingTrans {
    int line;
    std::string from;
    std::string sym;
    bool is_read;
    std::vector<std::pair<char, std::string>> reads;
    std::string to;
    StackOp op;
    std::string push_symbol;
  };
  std::vector<PendingTrans> pending;

  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  bool any = false;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = strip_comment(raw);
    LineParser p{line, 0, lineno};
    if (p.done()) continue;
    any = true;
    if (p.accept("trans")) {
      PendingTrans t;
      t.line = lineno;
      t.from = p.word();
      t.sym = p.word();
      p.expect("->");
      if (p.accept("read")) {
        t.is_read = true;
        p.expect("{");
        if (!p.accept("}")) {
          for (;;) {
            char c = p.letter();
            p.expect(":");
            t.reads.push_back({c, p.word()});
            if (p.accept(",")) continue;
            p.expect("}");
            break;
          }
        }
      } else {
        t.is_read = false;
        t.to = p.word();
        std::string op = p.word();
        if (op == "collapse") {
          t.op = StackOp::collapse();
        } else if (op.rfind("push", 0) == 0 || op.rfind("pop", 0) == 0) {
          bool push = op[1] == 'u';
          std::string digits = op.substr(push ? 4 : 3);
          if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit))
            p.fail("bad operation '" + op + "'");
          int k = std::stoi(digits);
          if (push) {
            t.push_symbol = p.word();
            t.op = StackOp::push(k, Symbol{});
          } else {
            t.op = StackOp::pop(k);
          }
        } else {
          p.fail("unknown operation '" + op + "'");
        }
      }
      if (!p.done()) p.fail("trailing input");
      pending.push_back(std::move(t));
      continue;
    }
    std::string key = p.word();
    p.expect(":");
    if (key == "order") {
      std::string v = p.word();
      if (v.empty() || !std::all_of(v.begin(), v.end(), ::isdigit)) p.fail("order must be a number");
      a.order = std::stoi(v);
      have_order = true;
    } else if (key == "mode") {
      std::string v = p.word();
      if (v == "plain") a.mode = Mode::Plain;
      else if (v == "collapse") a.mode = Mode::Collapse;
      else p.fail("mode must be plain or collapse");
    } else if (key == "input") {
      while (!p.done()) {
        char c = p.letter();
        if (a.has_letter(c)) p.fail("duplicate letter");
        a.input.push_back(c);
      }
    } else if (key == "stack") {
      while (!p.done()) a.stack_alphabet.push_back(Symbol::intern(p.word()));
    } else if (key == "init-state") {
      init_state_name = p.word();
      have_init_state = true;
    } else if (key == "init-stack") {
      p.skip();
      a.init_stack = Plain::parse(line.substr(p.i));
      p.i = line.size();
    } else if (key == "init-symbol") {
      a.init_symbol = Symbol::intern(p.word());
      have_init_symbol = true;
    } else if (key == "accepting") {
      while (!p.done()) accepting_names.push_back(p.word());
    } else if (key == "states") {
      while (!p.done()) a.add_state(p.word());
    } else {
      p.fail("unknown key '" + key + "'");
    }
    if (!p.done()) p.fail("trailing input");
  }
  if (!any) throw Error(ErrorKind::Parse, "line 0: empty automaton source");
  if (!have_order) throw Error(ErrorKind::Parse, "missing 'order:'");
  if (!have_init_state) throw Error(ErrorKind::Parse, "missing 'init-state:'");
  if (!have_init_symbol) {
    if (!a.init_stack) throw Error(ErrorKind::Parse, "missing 'init-symbol:'");
    const Plain* cur = &*a.init_stack;
    while (cur->order > 0) cur = &cur->items.back();
    a.init_symbol = cur->symbol;
  }

  a.init_state = a.add_state(init_state_name);
  for (const auto& t : pending) {
    a.add_state(t.from);
    if (t.is_read)
      for (const auto& r : t.reads) a.add_state(r.second);
    else
      a.add_state(t.to);
  }
  for (const auto& name : accepting_names) {
    int q = a.state_index(name);
    if (q < 0) q = a.add_state(name);
    a.accepting[q] = true;
  }
  for (const auto& t : pending) {
    Symbol sym = Symbol::intern(t.sym);
    if (!a.has_symbol(sym))
      throw Error(ErrorKind::UnknownName, "line " + std::to_string(t.line) + ": unknown stack symbol '" + t.sym + "'");
    int from = a.state_index(t.from);
    if (a.delta(from, sym))
      throw Error(ErrorKind::Parse, "line " + std::to_string(t.line) + ": duplicate transition");
    Transition tr;
    tr.is_read = t.is_read;
    if (t.is_read) {
      for (const auto& [c, q] : t.reads) {
        if (!a.has_letter(c))
          throw Error(ErrorKind::UnknownName, "line " + std::to_string(t.line) + ": unknown letter '" + std::string(1, c) + "'");
        if (tr.read.count(c))
          throw Error(ErrorKind::Parse, "line " + std::to_string(t.line) + ": letter repeated in read map");
        tr.read[c] = a.state_index(q);
      }
    } else {
      tr.target = a.state_index(t.to);
      tr.op = t.op;
      if (tr.op.kind == OpKind::Push) {
        tr.op.symbol = Symbol::intern(t.push_symbol);
        if (!a.has_symbol(tr.op.symbol))
          throw Error(ErrorKind::UnknownName, "line " + std::to_string(t.line) + ": unknown stack symbol '" + t.push_symbol + "'");
      }
    }
    a.set(from, sym, tr);
  }
  a.check();
  return a;
}

Automaton load_automaton(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::Parse, "cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_automaton(ss.str());
}

std::string to_source(const Automaton& a) {
  std::ostringstream out;
  out << "order: " << a.order << "\n";
  out << "mode: " << (a.collapse() ? "collapse" : "plain") << "\n";
  out << "input:";
  for (char c : a.input) out << " '" << c << "'";
  out << "\nstack:";
  for (Symbol s : a.stack_alphabet) out << " " << s.name();
  out << "\nstates:";
  for (const auto& q : a.states) out << " " << q;
  out << "\ninit-state: " << a.states[a.init_state] << "\n";
  out << "init-symbol: " << a.init_symbol.name() << "\n";
  if (a.init_stack) out << "init-stack: " << a.init_stack->str() << "\n";
  out << "accepting:";
  for (std::size_t q = 0; q < a.states.size(); ++q)
    if (a.accepting[q]) out << " " << a.states[q];
  out << "\n";
  for (const auto& [key, t] : a.transitions()) {
    out << "trans " << a.states[key.first] << " " << key.second.name() << " -> ";
    if (t->is_read) {
      out << "read {";
      bool first = true;
      for (const auto& [c, q] : t->read) {
        out << (first ? " " : ", ") << "'" << c << "': " << a.states[q];
        first = false;
      }
      out << " }";
    } else {
      out << a.states[t->target] << " ";
      switch (t->op.kind) {
        case OpKind::Push: out << "push" << t->op.order << " " << t->op.symbol.name(); break;
        case OpKind::Pop: out << "pop" << t->op.order; break;
        case OpKind::Collapse: out << "collapse"; break;
      }
    }
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------- semantics

bool same_stack(const Stack& a, const Stack& b) {
  if (a.same_node(b)) return true;
  if (a.order() != b.order()) return false;
  if (a.order() == 0) {
    const Cell& x = a.cell();
    const Cell& y = b.cell();
    return x.symbol == y.symbol && x.pos == y.pos && x.link == y.link;
  }
  if (a.size() != b.size()) return false;
  auto xs = a.items();
  auto ys = b.items();
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (!same_stack(xs[i], ys[i])) return false;
  return true;
}

bool same_configuration(const Configuration& a, const Configuration& b) {
  return a.state == b.state && same_stack(a.stack, b.stack);
}

Configuration initial_configuration(const Automaton& a) {
  if (a.init_stack) return Configuration{a.init_state, pos_plus(*a.init_stack, a.order)};
  return Configuration{a.init_state, initial_stack(a.order, a.init_symbol)};
}

const char* to_string(Halt h) {
  switch (h) {
    case Halt::None: return "none";
    case Halt::BlockedPop: return "BlockedPop";
    case Halt::NoTransition: return "NoTransition";
    case Halt::LetterNotAccepted: return "LetterNotAccepted";
    case Halt::SilentBudgetExceeded: return "SilentBudgetExceeded";
    case Halt::StepCap: return "StepCap";
  }
  return "?";
}

std::optional<bool> is_read_configuration(const Automaton& a, const Configuration& c) {
  const Transition* t = a.delta(c.state, top_cell(c.stack).symbol);
  if (!t) return std::nullopt;
  return t->is_read;
}

StepOutcome step(const Automaton& a, const Configuration& c, std::optional<char> letter) {
  StepOutcome out;
  const Transition* t = a.delta(c.state, top_cell(c.stack).symbol);
  if (!t) {
    out.halt = Halt::NoTransition;
    return out;
  }
  if (t->is_read) {
    if (!letter) throw Error(ErrorKind::Precondition, "step: read transition needs a letter");
    auto it = t->read.find(*letter);
    if (it == t->read.end()) {
      out.halt = Halt::LetterNotAccepted;
      return out;
    }
    out.witness.is_read = true;
    out.witness.letter = *letter;
    out.next = Configuration{it->second, c.stack};
    return out;
  }
  if (letter) throw Error(ErrorKind::Precondition, "step: silent transition takes no letter");
  auto next = try_apply(t->op, c.stack, a.collapse());
  if (!next) {
    out.halt = Halt::BlockedPop;
    return out;
  }
  out.witness.is_read = false;
  out.witness.op = t->op;
  out.next = Configuration{t->target, std::move(*next)};
  return out;
}

void Run::append(const StepWitness& w, Configuration next) {
  steps_.push_back(w);
  configs_.push_back(std::move(next));
}

Run Run::subrun(std::size_t i, std::size_t j) const {
  if (i > j || j > length())
    throw Error(ErrorKind::Precondition, "subrun: bad bounds " + std::to_string(i) + ".." + std::to_string(j));
  Run r;
  r.configs_.assign(configs_.begin() + i, configs_.begin() + j + 1);
  r.steps_.assign(steps_.begin() + i, steps_.begin() + j);
  return r;
}

Run Run::compose(const Run& next) const {
  if (configs_.empty() || next.configs_.empty() || !same_configuration(back(), next.front()))
    throw Error(ErrorKind::Precondition, "compose: runs do not meet");
  Run r = *this;
  r.steps_.insert(r.steps_.end(), next.steps_.begin(), next.steps_.end());
  r.configs_.insert(r.configs_.end(), next.configs_.begin() + 1, next.configs_.end());
  return r;
}

std::string Run::word() const {
  std::string w;
  for (const auto& s : steps_)
    if (s.is_read) w += s.letter;
  return w;
}

std::size_t Run::sharps(char sharp) const {
  std::size_t n = 0;
  for (const auto& s : steps_)
    if (s.is_read && s.letter == sharp) ++n;
  return n;
}

namespace {

void extend_runs(const Automaton& a, Run& run, std::size_t max_len,
                 const std::function<void(const Run&)>& visit) {
  if (run.length() == max_len) {
    visit(run);
    return;
  }
  const Configuration& cur = run.back();
  const Transition* t = a.delta(cur.state, top_cell(cur.stack).symbol);
  bool extended = false;
  auto branch = [&](std::optional<char> letter) {
    StepOutcome s = step(a, run.back(), letter);
    if (!s.next) return;
    extended = true;
    Run longer = run;
    longer.append(s.witness, std::move(*s.next));
    extend_runs(a, longer, max_len, visit);
  };
  if (t && t->is_read) {
    for (const auto& [letter, target] : t->read) branch(letter);
  } else if (t) {
    branch(std::nullopt);
  }
  if (!extended) visit(run);
}

}  // namespace

void for_each_maximal_run(const Automaton& a, const Configuration& c, std::size_t max_len,
                          const std::function<void(const Run&)>& visit) {
  Run run(c);
  extend_runs(a, run, max_len, visit);
}

WordRun run_word_from(const Automaton& a, const Configuration& c, std::string_view word,
                      std::size_t silent_budget) {
  WordRun out;
  out.run = Run(c);
  std::size_t silent = 0;
  for (;;) {
    const Configuration& cur = out.run.back();
    if (out.consumed == word.size() && a.accepting[cur.state]) {
      out.accepted = true;
      return out;
    }
    const Transition* t = a.delta(cur.state, top_cell(cur.stack).symbol);
    if (!t) {
      out.halt = Halt::NoTransition;
      return out;
    }
    std::optional<char> letter;
    if (t->is_read) {
      if (out.consumed == word.size()) return out;
      letter = word[out.consumed];
    } else if (++silent > silent_budget) {
      out.halt = Halt::SilentBudgetExceeded;
      return out;
    }
    StepOutcome s = step(a, cur, letter);
    if (!s.next) {
      out.halt = s.halt;
      return out;
    }
    if (t->is_read) {
      ++out.consumed;
      silent = 0;
    }
    out.run.append(s.witness, std::move(*s.next));
  }
}

WordRun run_word(const Automaton& a, std::string_view word, std::size_t silent_budget) {
  return run_word_from(a, initial_configuration(a), word, silent_budget);
}

Automaton order_lift(const Automaton& a, int new_order) {
  if (new_order == 0) new_order = a.order + 1;
  if (a.collapse()) throw Error(ErrorKind::Precondition, "order_lift: collapse automata are not supported");
  if (new_order < a.order || new_order > kMaxOrder)
    throw Error(ErrorKind::OrderOutOfRange, "order_lift: bad target order " + std::to_string(new_order));
  for (const auto& [key, t] : a.transitions())
    if (!t->is_read && t->op.order >= new_order)
      throw Error(ErrorKind::Precondition, "order_lift: input already uses " + t->op.str());

  Automaton b;
  b.order = new_order;
  b.mode = Mode::Plain;
  b.input = a.input;
  b.stack_alphabet = a.stack_alphabet;
  b.init_symbol = a.init_symbol;
  if (a.init_stack) {
    Plain p = *a.init_stack;
    while (p.order < new_order) p = Plain::list(p.order + 1, {p});
    b.init_stack = p;
  }
  for (const auto& q : a.states) b.add_state(q);
  auto fresh = [&](std::string base) {
    while (b.state_index(base) >= 0) base += "'";
    return b.add_state(base);
  };
  const int start = fresh("lift_start");
  const int done = fresh("lift_accept");
  b.init_state = start;
  b.accepting[done] = true;

  Transition t0;
  t0.target = a.init_state;
  const Symbol top_symbol = top_cell(initial_configuration(a).stack).symbol;
  t0.op = StackOp::push(new_order, top_symbol);
  b.set(start, top_symbol, t0);
  for (int q = 0; q < static_cast<int>(a.states.size()); ++q) {
    for (Symbol s : a.stack_alphabet) {
      if (a.accepting[q]) {
        Transition fin;
        fin.target = done;
        fin.op = StackOp::pop(new_order);
        b.set(q, s, fin);
      } else if (const Transition* t = a.delta(q, s)) {
        b.set(q, s, *t);
      }
    }
  }
  b.check();
  return b;
}

nlohmann::json stack_json(const Stack& s) {
  if (s.order() == 0) return s.cell().symbol.name();
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& it : s.items()) arr.push_back(stack_json(it));
  return arr;
}

nlohmann::json trace_json(const Automaton& a, const Run& r) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i <= r.length(); ++i) {
    nlohmann::json e;
    e["state"] = a.state_name(r.at(i).state);
    e["stack"] = stack_json(r.at(i).stack);
    if (i == 0) {
      e["letter"] = nullptr;
      e["op"] = nullptr;
    } else {
      const auto& w = r.witness(i - 1);
      e["letter"] = w.is_read ? nlohmann::json(std::string(1, w.letter)) : nlohmann::json(nullptr);
      e["op"] = w.is_read ? nlohmann::json(nullptr) : nlohmann::json(w.op.str());
    }
    out.push_back(e);
  }
  return out;
}

}  // namespace hopda
