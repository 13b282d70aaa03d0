#include "hopda/labbench.hpp"

#include <algorithm>

#include "hopda/seplang.hpp"

namespace hopda {

Automaton random_plain_automaton(std::mt19937_64& rng, const RandomAutomatonSpec& spec) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  Automaton a;
  a.order = 2;
  a.mode = Mode::Plain;
  a.input = {'a', 'b', '#'};
  const int symbols = pick(1, std::max(1, spec.max_symbols));
  const char* names[] = {"g", "h", "i", "j"};
  for (int i = 0; i < std::min(symbols, 4); ++i) a.stack_alphabet.push_back(Symbol::intern(names[i]));
  a.init_symbol = a.stack_alphabet.front();
  const int states = pick(spec.min_states, spec.max_states);
  for (int q = 0; q < states; ++q) a.add_state("q" + std::to_string(q));
  a.init_state = 0;
  a.accepting.assign(states, false);

  for (int q = 0; q < states; ++q) {
    for (Symbol g : a.stack_alphabet) {
      const int roll = pick(0, 99);
      if (roll < 8) continue;
      Transition t;
      if (roll < 30) {
        t.is_read = true;
        std::vector<int> targets(states);
        for (int i = 0; i < states; ++i) targets[i] = i;
        std::shuffle(targets.begin(), targets.end(), rng);
        const int letters = pick(1, std::min<int>(3, states));
        for (int i = 0; i < letters; ++i) t.read[a.input[i]] = targets[i];
      } else {
        t.target = pick(0, states - 1);
        const Symbol alpha = a.stack_alphabet[pick(0, symbols - 1)];
        if (roll < 45) t.op = StackOp::push(1, alpha);
        else if (roll < 58) t.op = StackOp::push(2, alpha);
        else if (roll < 82) t.op = StackOp::pop(1);
        else t.op = StackOp::pop(2);
      }
      a.set(q, g, std::move(t));
    }
  }
  a.check();
  return a;
}

namespace {

Plain random_stack(std::mt19937_64& rng, const Automaton& a) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::vector<Plain> outer;
  for (int i = pick(1, 3); i > 0; --i) {
    std::vector<Plain> cells;
    for (int j = pick(1, 3); j > 0; --j)
      cells.push_back(Plain::cell(a.stack_alphabet[pick(0, static_cast<int>(a.stack_alphabet.size()) - 1)]));
    outer.push_back(Plain::list(1, std::move(cells)));
  }
  return Plain::list(2, std::move(outer));
}

const Tree& top_tree(TypeSystem& ts, const AStack& s) {
  const AStack* cur = &s;
  while (cur->order > 0) cur = &cur->top_item();
  return ts.tree(cur->trees.front());
}

}  // namespace

std::optional<TypedFixture> random_typed_fixture(std::mt19937_64& rng, const DerivBudget& budget,
                                                 const RandomAutomatonSpec& spec) {
  Automaton a = random_plain_automaton(rng, spec);
  const Morphism m = rng() % 2 ? nonempty_morphism("ab#") : trivial_morphism("ab#");
  TypedFixture f;
  f.ts = std::make_shared<TypeSystem>(a, m);
  f.judgments = derive_judgments(*f.ts, budget);
  const Plain p = random_stack(rng, a);
  f.config = Configuration{static_cast<int>(rng() % a.states.size()), pos_plus(p)};
  const ConfigurationTypes types = types_of_configuration(*f.ts, f.judgments, f.config);
  if (types.types.empty()) return std::nullopt;
  // Descriptors with a nonempty witness give runs of positive length.
  const Symbol g = positionless(top(0, f.config.stack)).symbol;
  DescSet moving;
  for (DescId d : types.types)
    if (f.ts->tree(f.judgments.witness.at({g, d}).front()).kind != TreeKind::Empty) moving.push_back(d);
  const DescSet& pool = moving.empty() ? types.types : moving;
  f.sigma = pool[rng() % pool.size()];
  f.start = annotate_configuration(*f.ts, f.judgments, f.config, f.sigma, rng);
  return f;
}

LemmaCheck check_low_high_len(TypeSystem& ts, const AnnotatedRun& r, const MeasureContext& ctx) {
  std::vector<Measures> ms;
  ms.reserve(r.stacks.size());
  for (const AStack& s : r.stacks) ms.push_back(measures(ts, s, ctx));
  // sharps[i] counts the sharps read by the first i steps.
  std::vector<std::size_t> sharps{0};
  for (std::size_t i = 0; i < r.run.length(); ++i) {
    const StepWitness& w = r.run.witness(i);
    sharps.push_back(sharps.back() + (w.is_read && w.letter == ts.sharp() ? 1 : 0));
  }
  LemmaCheck out;
  auto fail = [&](std::size_t i, std::size_t j, const char* which) {
    if (out.violations++ == 0)
      out.first_violation = std::string(which) + " fails on R[" + std::to_string(i) + ".." + std::to_string(j) + "]";
  };
  for (std::size_t i = 0; i < ms.size(); ++i) {
    for (std::size_t j = i; j < ms.size(); ++j) {
      ++out.pairs;
      const mpz_class read = static_cast<unsigned long>(sharps[j] - sharps[i]);
      if (ms[i].low > read + ms[j].low) fail(i, j, "low");
      if (ms[i].high && ms[j].high) {
        ++out.high_checked;
        if (*ms[i].high < read + *ms[j].high) fail(i, j, "high");
      }
      if (ms[i].len && ms[j].len) {
        ++out.len_checked;
        if (*ms[i].len < mpz_class(static_cast<unsigned long>(j - i)) + *ms[j].len) fail(i, j, "len");
      }
    }
  }
  return out;
}

SuccessorCheck check_successors(TypeSystem& ts, const AnnotatedRun& r) {
  SuccessorCheck out;
  auto fail = [&](std::size_t i, const std::string& what) {
    if (out.failures++ == 0) out.first_failure = "stack " + std::to_string(i) + ": " + what;
  };
  if (!r.mismatch.empty()) fail(0, r.mismatch);
  if (r.stacks.size() != r.run.length() + 1) fail(0, "run and stack sequence differ in length");
  for (std::size_t i = 0; i < r.stacks.size(); ++i) {
    ++out.stacks;
    const AStack& s = r.stacks[i];
    const WellFormedReport wf = check_well_formed(ts, s);
    if (!wf.ok()) {
      fail(i, std::string("not well-formed (") + to_string(wf.verdict) + ")");
      continue;
    }
    if (!singular(ts, s)) {
      fail(i, "not singular");
      continue;
    }
    const bool last = i + 1 == r.stacks.size();
    const bool empty_top = top_tree(ts, s).kind == TreeKind::Empty;
    if (!last && empty_top) fail(i, "an empty tree has a successor");
    if (last && !r.cap_exceeded && !empty_top) fail(i, "the run stopped above a nonempty tree");
    if (empty_top && successor(ts, s)) fail(i, "successor defined at an empty tree");
  }
  return out;
}

std::string word_family(int k, int n) {
  if (k < 0 || n < 0 || k > 4 || n > 8) throw Error(ErrorKind::Precondition, "word_family needs 0 <= k <= 4 and 0 <= N <= 8");
  std::string w = "[";
  for (int i = 0; i < k; ++i) {
    std::string next;
    for (int j = 0; j < n; ++j) next += w;
    next += std::string(n, ']');
    next += '[';
    w = std::move(next);
  }
  return w;
}

nlohmann::json ReplayReport::to_json() const {
  nlohmann::json j{{"halted", halted}, {"halt", to_string(halt)}, {"steps", steps}, {"parallel", parallel}};
  auto types = [](const std::optional<ConfigurationTypes>& t) -> nlohmann::json {
    if (!t) return nullptr;
    return {{"count", t->types.size()}, {"saturated", t->saturated}, {"max_card", t->budget.max_card},
            {"max_depth", t->budget.max_depth}};
  };
  j["types_r0"] = types(types_r0);
  j["types_c"] = types(types_c);
  return j;
}

ReplayReport replay_parallel_check(const Automaton& a, const Morphism& m, const Configuration& c, const Run& r,
                                   int k, const DerivBudget& budget) {
  if (!is_upper(r, k)) throw Error(ErrorKind::Precondition, "the reference run is not " + std::to_string(k) + "-upper");
  if (!(positionless(top(k, c.stack)) == positionless(top(k, r.front().stack))))
    throw Error(ErrorKind::Precondition, "the topmost " + std::to_string(k) + "-stacks differ");
  ReplayReport out;
  out.replay = Run(c);
  for (std::size_t i = 0; i < r.length(); ++i) {
    const StepWitness& w = r.witness(i);
    const StepOutcome o = step(a, out.replay.back(), w.is_read ? std::optional<char>(w.letter) : std::nullopt);
    if (!o.next || o.witness.is_read != w.is_read) {
      out.halted = true;
      out.halt = o.next ? Halt::NoTransition : o.halt;
      break;
    }
    out.replay.append(o.witness, *o.next);
  }
  out.steps = out.replay.length();
  out.parallel = !out.halted && parallel(k, m, r, out.replay);
  if (!a.collapse()) {
    TypeSystem ts(a, m);
    const JudgmentSet j = derive_judgments(ts, budget);
    out.types_r0 = types_of_configuration(ts, j, r.front());
    out.types_c = types_of_configuration(ts, j, c);
  }
  return out;
}

SlotWord SlotWord::parse(std::string_view text) {
  const std::size_t at = text.find('|');
  if (at == std::string_view::npos || text.find('|', at + 1) != std::string_view::npos)
    throw Error(ErrorKind::Parse, "a slot word needs exactly one '|'");
  return SlotWord{std::string(text.substr(0, at)), std::string(text.substr(at + 1))};
}

std::string SlotWord::fill(std::size_t n) const { return before + std::string(n, '*') + after; }

std::vector<SharpGrowthRow> sharp_growth_experiment(const SlotWord& w, const std::vector<std::size_t>& insertions) {
  const Automaton u = build_u_automaton();
  std::vector<SharpGrowthRow> rows;
  for (std::size_t j : insertions) {
    const std::string word = w.fill(j);
    SharpGrowthRow row{j, stars(word), {}};
    for (std::size_t s = 0; s <= word.size() + 2; ++s)
      if (run_word(u, word + std::string(s, '#')).accepted) row.accepted.push_back(s);
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json sharp_growth_json(const std::vector<SharpGrowthRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const SharpGrowthRow& r : rows)
    out.push_back({{"inserted", r.inserted}, {"oracle_stars", r.oracle_stars}, {"accepted", r.accepted}});
  return out;
}

}  // namespace hopda
