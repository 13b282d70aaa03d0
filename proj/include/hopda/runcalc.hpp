#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hopda/automaton.hpp"
#include "hopda/monoid.hpp"

namespace hopda {

// A k-stack of some configuration, named by the coordinates (x_n, ..., x_{k+1})
// shared by all of its 0-stacks. Coordinates x_k, ..., x_1 are kept at zero.
struct StackRef {
  int order = 0;
  Position prefix;

  bool operator==(const StackRef& o) const = default;
  std::string str() const;
};

// top^k of the stack.
StackRef top_ref(const Stack& s, int k);
// top^(k-1)(pop^k(s)); nullopt when the topmost k-stack has a single element.
std::optional<StackRef> below_top_ref(const Stack& s, int k);
// The ref of the k-stack containing the given (lower order) ref.
StackRef enclosing_ref(const StackRef& r, int k);
// The substack named by r, or nullopt.
std::optional<Stack> resolve(const Stack& s, const StackRef& r);
// top^(k-1) of the k-stack named by r. Throws Error(UnresolvableRef).
StackRef top_within(const Stack& s, const StackRef& r);

// Maps a ref of R(|R|) to the k-stack of R(0) it evolved from.
// Throws Error(UnresolvableRef) when ref does not resolve in R(|R|).
StackRef hist(const Run& run, const StackRef& ref);
// One step backwards: a ref of run.at(i + 1) to a ref of run.at(i).
StackRef hist_step(const Run& run, std::size_t i, const StackRef& ref);

struct Classification {
  int k = 0;
  bool upper = false;
  bool ret = false;
};

bool is_upper(const Run& run, int k);
bool is_return(const Run& run, int k);
Classification classify(const Run& run, int k);

// For a fixed end j, membership of run[i..j] for every i <= j, computed in one
// backward sweep.
struct EndpointSweep {
  std::vector<bool> upper;  // run[i..j] in up^k
  std::vector<bool> ret;    // run[i..j] in ret^k (all false when k = 0)
};
EndpointSweep sweep_to(const Run& run, std::size_t j, int k);

// Recognizers built only from the one-step cases and composition; they never
// evaluate hist. Valid for runs without collapse.
class RecursiveRecognizer {
 public:
  explicit RecursiveRecognizer(const Run& run);
  bool upper(int k, std::size_t i, std::size_t j);
  bool ret(int r, std::size_t i, std::size_t j);

 private:
  const Run& run_;
  int n_;
  std::size_t len_;
  std::vector<signed char> up_memo_;
  std::vector<signed char> ret_memo_;
  std::size_t slot(int k, std::size_t i, std::size_t j) const;
};

// Pieces [b_0, b_1], [b_1, b_2], ... of the unique maximal decomposition of a
// k-upper run into nonempty k-upper runs; returns the boundaries b_0 = 0 < ... = |R|.
// Throws Error(Precondition) when the run is not k-upper.
std::vector<std::size_t> max_upper_boundaries(const Run& run, int k);
std::vector<Run> max_upper_decomposition(const Run& run, int k);

bool parallel(int k, const Morphism& phi, const Run& r, const Run& s);

// {i in [lo, hi] : run[i..hi] in up^k}.
std::vector<std::size_t> advancing_set(const Run& run, int k, std::size_t lo, std::size_t hi);

// Whether hist(run[0..i], top^(k-1)(ref)) differs from top^(k-1)(c0), where ref
// is a k-stack of run.at(i) and c0 = run.at(0).
bool is_clear(const Run& run, std::size_t i, const StackRef& ref);

// Rows {j, stack, up0, ..., up(n-1), ret1, ..., retn} listing for every j the
// indices i with run[i..j] in the given class.
nlohmann::json classification_table(const Run& run);

}  // namespace hopda
