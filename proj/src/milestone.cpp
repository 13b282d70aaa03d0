#include "hopda/milestone.hpp"

#include <memory>

#include "hopda/runcalc.hpp"

namespace hopda {

StarRun star_run(const Automaton& a, const Configuration& c, std::size_t max_steps, char star) {
  if (!a.has_letter(star)) throw Error(ErrorKind::Precondition, std::string("the input alphabet lacks '") + star + "'");
  StarRun out{Run(c), Halt::None};
  while (out.run.length() < max_steps) {
    const std::optional<bool> reads = is_read_configuration(a, out.run.back());
    if (!reads) {
      out.halt = Halt::NoTransition;
      break;
    }
    const StepOutcome o = step(a, out.run.back(), *reads ? std::optional<char>(star) : std::nullopt);
    if (!o.next) {
      out.halt = o.halt;
      break;
    }
    out.run.append(o.witness, *o.next);
  }
  return out;
}

const char* to_string(CertificateKind k) {
  return k == CertificateKind::LoopByType ? "loop-by-type" : "loop-by-period(heuristic)";
}

nlohmann::json MilestoneCertificate::to_json() const {
  return {{"kind", to_string(kind)},
          {"i", i},
          {"j", j},
          {"periods_verified", periods_verified},
          {"type_budget",
           {{"max_card", type_budget.max_card},
            {"max_depth", type_budget.max_depth},
            {"saturated", types_saturated}}}};
}

namespace {

// Loop search over a fixed star run. upper_[j][i] says whether R[i..j] is
// 0-upper.
class LoopFinder {
 public:
  LoopFinder(const Automaton& a, const Morphism& m, const Run& r, const MilestoneBudget& b) : r_(r), b_(b) {
    const std::size_t len = r.length();
    upper_.reserve(len + 1);
    for (std::size_t j = 0; j <= len; ++j) upper_.push_back(sweep_to(r, j, 0).upper);
    if (!a.collapse()) {
      ts_ = std::make_unique<TypeSystem>(a, m);
      judgments_ = derive_judgments(*ts_, b.types);
    }
    types_.resize(len + 1);
    typed_.assign(len + 1, false);
  }

  std::size_t length() const { return r_.length(); }
  bool typed() const { return ts_ != nullptr; }
  bool saturated() const { return judgments_.saturated; }
  bool upper(std::size_t i, std::size_t j) const { return upper_[j][i]; }

  bool same_key(std::size_t i, std::size_t j) const {
    const Configuration& x = r_.at(i);
    const Configuration& y = r_.at(j);
    return x.state == y.state && top_cell(x.stack).symbol == top_cell(y.stack).symbol;
  }

  bool same_types(std::size_t i, std::size_t j) {
    const std::optional<DescSet>& x = types(i);
    const std::optional<DescSet>& y = types(j);
    return x && y && *x == *y;
  }

  // The smallest j > i with a type loop from i.
  std::optional<std::size_t> type_loop(std::size_t i) {
    if (!typed()) return std::nullopt;
    for (std::size_t j = i + 1; j <= length(); ++j)
      if (upper(i, j) && same_key(i, j) && same_types(i, j)) return j;
    return std::nullopt;
  }

  // The smallest period p with `periods` verified repetitions after i.
  std::optional<std::size_t> period_loop(std::size_t i) const {
    for (std::size_t p = 1; p <= b_.max_period && i + p * (b_.periods + 1) <= length(); ++p) {
      bool ok = true;
      for (std::size_t t = 0; t <= b_.periods && ok; ++t) {
        const std::size_t from = i + t * p;
        ok = upper(from, from + p) && same_key(from, from + p);
      }
      if (ok) return p;
    }
    return std::nullopt;
  }

  MilestoneCertificate type_certificate(std::size_t i, std::size_t j) const {
    return {CertificateKind::LoopByType, i, j, 0, b_.types, saturated()};
  }
  MilestoneCertificate period_certificate(std::size_t i, std::size_t p) const {
    return {CertificateKind::LoopByPeriod, i, i + p, b_.periods, b_.types, false};
  }

 private:
  const Run& r_;
  const MilestoneBudget& b_;
  std::vector<std::vector<bool>> upper_;
  std::unique_ptr<TypeSystem> ts_;
  JudgmentSet judgments_;
  std::vector<std::optional<DescSet>> types_;
  std::vector<bool> typed_;

  const std::optional<DescSet>& types(std::size_t i) {
    if (!typed_[i]) {
      typed_[i] = true;
      try {
        types_[i] = types_of_configuration(*ts_, judgments_, r_.at(i)).types;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::BudgetExceeded) throw;
      }
    }
    return types_[i];
  }
};

void require_star_detection(const Morphism& m) {
  if (!detects_star_words(m)) throw Error(ErrorKind::Precondition, "the morphism does not detect star-only words");
}

}  // namespace

CertifyResult certify_milestone(const Automaton& a, const Morphism& m, const Configuration& c,
                                const MilestoneBudget& budget) {
  require_star_detection(m);
  const StarRun sr = star_run(a, c, budget.max_steps);
  CertifyResult out;
  out.halt = sr.halt;
  if (sr.halt != Halt::None) {
    out.reason = std::string("the star run halts (") + to_string(sr.halt) + ") after " +
                 std::to_string(sr.run.length()) + " steps";
    return out;
  }
  LoopFinder f(a, m, sr.run, budget);
  for (std::size_t i = 0; i <= f.length(); ++i) {
    if (!f.upper(0, i)) continue;
    if (auto j = f.type_loop(i)) {
      out.certificate = f.type_certificate(i, *j);
      return out;
    }
  }
  if (budget.allow_period) {
    for (std::size_t i = 0; i <= f.length(); ++i) {
      if (!f.upper(0, i)) continue;
      if (auto p = f.period_loop(i)) {
        out.certificate = f.period_certificate(i, *p);
        return out;
      }
    }
  }
  out.reason = "no loop within " + std::to_string(budget.max_steps) + " steps";
  return out;
}

nlohmann::json SequenceReport::to_json() const {
  nlohmann::json kinds_json = nlohmann::json::array();
  for (CertificateKind k : kinds) kinds_json.push_back(to_string(k));
  return {{"bound", bound},
          {"explored", star.run.length()},
          {"halt", to_string(star.halt)},
          {"certified", certified},
          {"kinds", kinds_json},
          {"pairs_checked", checked.size()},
          {"violations", violations},
          {"first_violation", first_violation}};
}

SequenceReport milestone_sequence_check(const Automaton& a, const Morphism& m, const Configuration& c,
                                        std::size_t bound, const MilestoneBudget& budget) {
  require_star_detection(m);
  SequenceReport out;
  out.bound = bound;
  out.star = star_run(a, c, bound + budget.max_steps);
  const std::size_t last = std::min(bound, out.star.run.length());
  LoopFinder f(a, m, out.star.run, budget);
  for (std::size_t t = 0; t <= last; ++t) {
    if (f.type_loop(t)) {
      out.certified.push_back(t);
      out.kinds.push_back(CertificateKind::LoopByType);
    } else if (budget.allow_period && f.period_loop(t)) {
      out.certified.push_back(t);
      out.kinds.push_back(CertificateKind::LoopByPeriod);
    }
  }
  for (std::size_t x = 0; x + 1 < out.certified.size(); ++x) {
    const std::size_t i = out.certified[x];
    const std::size_t j = out.certified[x + 1];
    out.checked.emplace_back(i, j);
    if (!f.upper(i, j) && out.violations++ == 0)
      out.first_violation = "R[" + std::to_string(i) + ".." + std::to_string(j) + "] is not 0-upper";
  }
  return out;
}

}  // namespace hopda
