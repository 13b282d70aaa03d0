#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hopda/fixtures.hpp"
#include "hopda/labbench.hpp"
#include "hopda/milestone.hpp"
#include "hopda/runcalc.hpp"
#include "hopda/seplang.hpp"
#include "hopda/typefixtures.hpp"

using namespace hopda;
using nlohmann::json;

namespace {

// Raised for bad flag values that CLI11 cannot see; exits with status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Automaton load(const std::string& ref) {
  if (std::filesystem::exists(ref)) return load_automaton(ref);
  for (const std::string& name : fixture_automaton_names())
    if (name == ref) return fixture_automaton(name);
  throw UsageError("no automaton file or built-in fixture named '" + ref + "'");
}

// "STATE:STACK", e.g. "q1:[[g],[g,g]]". Empty text selects the initial configuration.
Configuration parse_config(const Automaton& a, const std::string& text) {
  if (text.empty()) return initial_configuration(a);
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("--config expects STATE:STACK");
  const int q = a.state_index(text.substr(0, colon));
  if (q < 0) throw UsageError("unknown state '" + text.substr(0, colon) + "'");
  const Plain p = Plain::parse(text.substr(colon + 1));
  if (p.order != a.order) throw UsageError("the stack must have order " + std::to_string(a.order));
  return Configuration{q, pos_plus(p, a.order)};
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  for (std::string part; std::getline(in, part, ',');) out.push_back(part);
  return out;
}

DerivBudget parse_budget(const std::string& text) {
  DerivBudget b;
  if (text.empty()) return b;
  const std::vector<std::string> parts = split_commas(text);
  if (parts.size() != 2) throw UsageError("--budget expects CARD,DEPTH");
  try {
    b.max_card = std::stoul(parts[0]);
    b.max_depth = std::stoi(parts[1]);
  } catch (const std::exception&) {
    throw UsageError("--budget expects two numbers");
  }
  return b;
}

Morphism parse_morphism(const std::string& name, const Automaton& a) {
  const std::string alphabet(a.input.begin(), a.input.end());
  if (name == "nonempty") return nonempty_morphism(alphabet);
  if (name == "trivial") return trivial_morphism(alphabet);
  if (name == "stars") return stars_only_morphism(alphabet);
  throw UsageError("--morphism is one of nonempty, trivial, stars");
}

std::string index_list(const json& a) {
  if (a.empty()) return "-";
  std::string out;
  for (const json& i : a) out += (out.empty() ? "" : ",") + std::to_string(i.get<std::size_t>());
  return out;
}

void print_table(const json& rows, int n) {
  std::cout << "j | stack";
  for (int k = 0; k < n; ++k) std::cout << " | up" << k;
  for (int k = 1; k <= n; ++k) std::cout << " | ret" << k;
  std::cout << "\n";
  for (const json& row : rows) {
    std::cout << row["j"].get<std::size_t>() << " | " << row["stack"].get<std::string>();
    for (int k = 0; k < n; ++k) std::cout << " | " << index_list(row["up" + std::to_string(k)]);
    for (int k = 1; k <= n; ++k) std::cout << " | " << index_list(row["ret" + std::to_string(k)]);
    std::cout << "\n";
  }
}

std::string yes(bool b) { return b ? "yes" : "no"; }

std::string big(const std::optional<mpz_class>& x) { return x ? x->get_str() : "overflow"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Higher-order pushdown automata toolkit"};
  app.require_subcommand(1);

  std::string automaton, word, config, budget, fixture, ctable, experiment, morphism = "nonempty", trace;
  int k = 0;
  std::size_t cap = 100, bound = 0, steps = 400, count = 1000;
  bool table = false, as_json = false;
  std::uint64_t seed = 1;

  auto* run = app.add_subcommand("run", "run an automaton on a word");
  run->add_option("-a,--automaton", automaton, "automaton file or fixture name")->required();
  run->add_option("-w,--word", word, "input word")->required();
  run->add_option("--trace", trace, "trace format")->check(CLI::IsMember({"json"}));

  auto* classify_cmd = app.add_subcommand("classify", "classify the run of a word");
  classify_cmd->add_option("-a,--automaton", automaton, "automaton file or fixture name")->required();
  classify_cmd->add_option("-w,--word", word, "input word (default: empty)");
  auto* k_opt = classify_cmd->add_option("-k", k, "order; required without --table");
  classify_cmd->add_flag("--table", table, "print the matrix of upper runs and returns");
  classify_cmd->add_flag("--json", as_json, "JSON output");

  auto* types = app.add_subcommand("types", "budgeted types of a configuration");
  types->add_option("-a,--automaton", automaton, "automaton file or fixture name")->required();
  types->add_option("--config", config, "STATE:STACK (default: initial configuration)");
  types->add_option("--budget", budget, "CARD,DEPTH");
  types->add_option("--morphism", morphism, "nonempty | trivial | stars");

  auto* annotate = app.add_subcommand("annotate-step", "annotated run from a fixture stack");
  annotate->add_option("--fixture", fixture, "s1 .. s5 or a2")->required();
  annotate->add_option("--cap", cap, "maximal number of steps")->check(CLI::PositiveNumber);
  annotate->add_flag("--json", as_json, "JSON output");

  auto* measures_cmd = app.add_subcommand("measures", "low, high and len of a fixture stack");
  measures_cmd->add_option("--fixture", fixture, "s1 .. s5 or a2")->required();
  measures_cmd->add_option("--ctable", ctable, "C_0,C_1,... (default: the recurrence sized by the descriptor universe)");

  auto* ucheck = app.add_subcommand("u-check", "compare the U oracle with the U automaton");
  ucheck->add_option("-w,--word", word, "word over [ ] * #")->required();

  auto* milestone = app.add_subcommand("milestone", "certify a milestone configuration");
  milestone->add_option("-a,--automaton", automaton, "automaton file or fixture name")->required();
  milestone->add_option("--config", config, "STATE:STACK (default: initial configuration)");
  milestone->add_option("--budget", budget, "CARD,DEPTH");
  milestone->add_option("--steps", steps, "star-run length explored");
  milestone->add_option("--sequence", bound, "also check consecutive milestones up to this index");

  auto* bench = app.add_subcommand("bench", "run an experiment");
  bench->add_option("--experiment", experiment, "sharp-growth | word-family | lemma | replay-u")
      ->required()
      ->check(CLI::IsMember({"sharp-growth", "word-family", "lemma", "replay-u"}));
  bench->add_option("--count", count, "fixtures for the lemma experiment");
  bench->add_option("--seed", seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      const Automaton a = load(automaton);
      const WordRun r = run_word(a, word);
      if (!trace.empty()) {
        std::cout << trace_json(a, r.run).dump(2) << "\n";
      } else {
        std::cout << "accepted: " << yes(r.accepted) << ", halt: " << to_string(r.halt) << ", steps: " << r.run.length()
                  << ", consumed: " << r.consumed << "\n";
      }
      return 0;
    }

    if (*classify_cmd) {
      const Automaton a = load(automaton);
      if (!table && k_opt->count() == 0) throw UsageError("-k is required unless --table is given");
      if (k < 0 || k > a.order) throw UsageError("-k must lie in [0, " + std::to_string(a.order) + "]");
      const Run r = run_word(a, word).run;
      if (table) {
        const json rows = classification_table(r);
        if (as_json) std::cout << rows.dump(2) << "\n";
        else print_table(rows, a.order);
        return 0;
      }
      const bool upper = is_upper(r, k);
      const bool ret = k > 0 && is_return(r, k);
      if (as_json) std::cout << json{{"k", k}, {"length", r.length()}, {"upper", upper}, {"return", ret}}.dump() << "\n";
      else std::cout << "length: " << r.length() << ", " << k << "-upper: " << yes(upper) << ", " << k << "-return: " << yes(ret) << "\n";
      return 0;
    }

    if (*types) {
      const Automaton a = load(automaton);
      const Configuration c = parse_config(a, config);
      TypeSystem ts(a, parse_morphism(morphism, a));
      const JudgmentSet j = derive_judgments(ts, parse_budget(budget));
      const ConfigurationTypes t = types_of_configuration(ts, j, c);
      json out{{"budget", {{"max_card", t.budget.max_card}, {"max_depth", t.budget.max_depth}}},
               {"saturated", t.saturated},
               {"judgments", j.witness.size()}};
      json list = json::array();
      for (DescId d : t.types) list.push_back(ts.str(d));
      out["types"] = list;
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (*annotate) {
      const TypeFixture f = annotated_fixture(fixture);
      TypeSystem& ts = *f.ts;
      const AStack& s = f.stack(fixture);
      const std::map<TreeId, std::string> names = f.tree_names();
      const WellFormedReport wf = check_well_formed(ts, s);
      if (!wf.ok()) {
        std::cout << "not well-formed: " << to_string(wf.verdict) << " (" << wf.detail << ")\n";
        return 1;
      }
      if (s.order != ts.n() || !singular(ts, s)) {
        std::cout << "not a singular " << ts.n() << "-stack\n";
        return 1;
      }
      const AnnotatedRun r = annotated_run(ts, s, cap);
      if (as_json) {
        json stacks = json::array();
        for (const AStack& x : r.stacks) stacks.push_back(astack_json(ts, x));
        std::cout << json{{"stacks", stacks},
                          {"word", r.run.word()},
                          {"sharps", r.sharps(ts.sharp())},
                          {"cap_exceeded", r.cap_exceeded},
                          {"mismatch", r.mismatch}}
                         .dump(2)
                  << "\n";
      } else {
        for (std::size_t i = 0; i < r.stacks.size(); ++i) std::cout << i << ": " << render(r.stacks[i], &names) << "\n";
        std::cout << "word: " << r.run.word() << ", sharps: " << r.sharps(ts.sharp())
                  << (r.cap_exceeded ? ", cap exceeded" : ", halted") << "\n";
      }
      return r.mismatch.empty() ? 0 : 1;
    }

    if (*measures_cmd) {
      const TypeFixture f = annotated_fixture(fixture);
      TypeSystem& ts = *f.ts;
      MeasureContext ctx = MeasureContext::table({2});
      if (!ctable.empty()) {
        std::vector<mpz_class> c;
        for (const std::string& part : split_commas(ctable)) {
          mpz_class v;
          if (v.set_str(part, 10) != 0) throw UsageError("--ctable expects comma-separated integers");
          c.push_back(v);
        }
        ctx = MeasureContext::table(c);
      } else {
        std::size_t t0 = 0;
        for (DescId d = 0; d < ts.descriptor_count(); ++d) t0 += ts.order(d) == 0;
        int depth = 0;
        for (TreeId t = 0; t < ts.tree_count(); ++t) depth = std::max(depth, ts.tree(t).depth);
        ctx = MeasureContext::recurrence(std::max<std::size_t>(t0, 1), ts.n(), depth);
      }
      const Measures m = measures(ts, f.stack(fixture), ctx);
      std::cout << "low=" << m.low.get_str() << ", high=" << big(m.high) << ", len=" << big(m.len) << "\n";
      return 0;
    }

    if (*ucheck) {
      const bool member = u_member(word);
      const bool accept = run_word(build_u_automaton(), word).accepted;
      std::cout << "member: " << yes(member) << ", automaton: " << (accept ? "accept" : "reject") << ", "
                << (member == accept ? "agree" : "DISAGREE") << "\n";
      return member == accept ? 0 : 1;
    }

    if (*milestone) {
      const Automaton a = load(automaton);
      const Configuration c = parse_config(a, config);
      const Morphism m = stars_only_morphism(std::string(a.input.begin(), a.input.end()));
      MilestoneBudget b;
      b.types = parse_budget(budget);
      b.types.max_cells = 4096;
      b.max_steps = steps;
      const CertifyResult r = certify_milestone(a, m, c, b);
      json out;
      if (r.certificate) out["certificate"] = r.certificate->to_json();
      else out["unknown"] = r.reason;
      if (bound > 0) out["sequence"] = milestone_sequence_check(a, m, c, bound, b).to_json();
      std::cout << out.dump(2) << "\n";
      const bool bad = bound > 0 && out["sequence"]["violations"].get<std::size_t>() > 0;
      return r.certificate && !bad ? 0 : 1;
    }

    if (*bench) {
      if (experiment == "sharp-growth") {
        const std::string w2 = word_family(2, 3);
        std::vector<std::size_t> js;
        for (std::size_t j = 0; j <= 20; ++j) js.push_back(j);
        const SlotWord before{w2.substr(0, w2.size() - 1), w2.substr(w2.size() - 1)};
        const SlotWord after{w2, ""};
        std::cout << json{{"template", w2},
                          {"before_slot", sharp_growth_json(sharp_growth_experiment(before, js))},
                          {"after_slot", sharp_growth_json(sharp_growth_experiment(after, js))}}
                         .dump(2)
                  << "\n";
      } else if (experiment == "word-family") {
        json rows = json::array();
        for (int kk = 0; kk <= 3; ++kk)
          for (int n = 1; n <= 4; ++n) rows.push_back({{"k", kk}, {"N", n}, {"length", word_family(kk, n).size()}});
        std::cout << rows.dump(2) << "\n";
      } else if (experiment == "lemma") {
        std::mt19937_64 rng(seed);
        const DerivBudget b;
        const MeasureContext ctx = MeasureContext::recurrence(b.max_card, 2, b.max_depth);
        std::size_t fixtures = 0, pairs = 0, violations = 0, failures = 0, steps_total = 0;
        while (fixtures < count) {
          auto f = random_typed_fixture(rng, b);
          if (!f) continue;
          ++fixtures;
          const AnnotatedRun r = annotated_run(*f->ts, f->start, 200);
          steps_total += r.run.length();
          const LemmaCheck lc = check_low_high_len(*f->ts, r, ctx);
          pairs += lc.pairs;
          violations += lc.violations;
          failures += check_successors(*f->ts, r).failures;
        }
        std::cout << json{{"fixtures", fixtures},
                          {"steps", steps_total},
                          {"pairs", pairs},
                          {"violations", violations},
                          {"successor_failures", failures}}
                         .dump(2)
                  << "\n";
        return violations == 0 && failures == 0 ? 0 : 1;
      } else {
        const Automaton u = build_u_automaton();
        const Run one = run_word(u, "*[").run;
        const Run two = run_word(u, "**[").run;
        const WordRun cont = run_word_from(u, one.back(), "*]");
        std::cout << replay_parallel_check(u, star_sharp_bracket_morphism(), two.back(), cont.run, 1).to_json().dump(2)
                  << "\n";
      }
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
