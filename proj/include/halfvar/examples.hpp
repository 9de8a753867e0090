#ifndef HALFVAR_EXAMPLES_HPP
#define HALFVAR_EXAMPLES_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "halfvar/closed_set.hpp"
#include "halfvar/path.hpp"
#include "halfvar/variation.hpp"

namespace halfvar {

/// A built-in path with its canonical decomposition, analytic facts and expected verdict.
/// Ledger entries are {"fact", "value", "basis"} with basis one of "closed-form",
/// "direct-summation", "construction".
struct ExampleBundle {
  ExampleBundle(std::string n, Path p) : name(std::move(n)), path(std::move(p)) {}

  std::string name;
  Path path;
  std::vector<ClosedSet> decomposition;
  nlohmann::json ledger = nlohmann::json::array();
  Verdict expected = Verdict::certified;
  std::shared_ptr<RefutationSchema> refutation;

  nlohmann::json to_json() const;
};

// ---------------------------------------------------------------------------------------
// Harmonic tents

enum class Spacing { dyadic, harmonic };
std::string to_string(Spacing s);
Spacing spacing_from_string(const std::string& s);

/// a_n = 2^{-n} (dyadic) or 1/(n+1) (harmonic).
double harmonic_abscissa(int n, Spacing s);

/// Tents on [a_{2k+2}, a_{2k}] with peak 1/k^2 at a_{2k+1}, k = 1..N; f = 0 on
/// [0, a_{2N+2}] and [a_2, 1]. K_f = {0, 1} ∪ {a_n : n >= 2}. Decomposition: singletons of
/// the enumerated K_f points plus the tail {0} ∪ {a_n : n >= 2N+2}, on which f vanishes.
ExampleBundle harmonic_tent_example(int N, Spacing spacing = Spacing::dyadic);

/// 2 H_N summed in the same left-to-right order as the consecutive sum over K_f.
double harmonic_v_half(int N);

// ---------------------------------------------------------------------------------------
// Cantor example

/// One tent interval I_{nik}: middle third of its host, a contiguous interval of C.
struct CantorTent {
  int n = 0, i = 0, k = 0;
  int generation = 0;          // host length 3^{-generation}
  std::int64_t host_left = 0;  // host = ((3L+1), (3L+2)) / 3^generation with L = host_left
  double a = 0.0;              // 4^{-(n+i)} / k^2
  OpenInterval host;
  double l = 0.0, c = 0.0, r = 0.0;
};

/// Generation that hosts level n: g with n = 1 + v2(g - 1).
int cantor_host_level(int generation);

/// Hosts for block K^n_i in order (increasing generation, then left to right), first k_max.
std::vector<CantorTent> cantor_tents_for_block(int n, int i, int k_max);

struct CantorConditions {
  bool disjoint = false;        // (i)
  bool summable = false;        // (ii) partial sums within the closed-form bound
  bool divergent_trend = false; // (iii)
  bool finite_per_gap = false;  // (iv)
  bool separated = false;       // (v)
  bool contained = false;       // (vi)
  double a_sum = 0.0;
  double a_bound = 0.0;
  double a_bound_coarse = 0.0;
  bool all() const { return disjoint && summable && divergent_trend && finite_per_gap && separated && contained; }
  nlohmann::json to_json() const;
};

struct CantorExample {
  ExampleBundle bundle;
  std::vector<CantorTent> tents;  // sorted by left endpoint
  int n_max = 0;
  int k_max = 0;
  CantorConditions check() const;
};

/// Tents for n = 1..n_max, i = 1..2^n, k = 1..k_max.
CantorExample cantor_nonvbg_example(int n_max, int k_max);

/// sum_{k<=K} sqrt(a_{nik}) = 2^{-(n+i)} H_K.
double cantor_sqrt_sum(int n, int i, int K);
/// Closed-form bound on sum a_{nik} over all n >= 1: sum_n 4^{-n} (1 - 4^{-2^n}) / 3 * pi^2/6.
double cantor_a_bound();

// ---------------------------------------------------------------------------------------
// Random zigzags

/// Polyline in [0,1]^d on [0,1] with `corners` interior corners (every breakpoint turns).
Path random_zigzag(std::size_t d, std::size_t corners, std::uint64_t seed);
/// Two unit segments on [0, 2] meeting at a right angle at t = 1.
Path single_corner_zigzag();
/// t -> (t, 2t) on [0,1].
Path affine_example();

/// Looks up a built-in by name: harmonic-tents, cantor, zigzag, single-corner, affine.
/// `depth` is N, k_max or the corner count; `seed` drives the zigzag.
ExampleBundle example_by_name(const std::string& name, int depth, std::uint64_t seed);

/// V_alpha(f_d, K_{f_d}) of the named generator at truncation depths d = 1, 2, 4, ..., depth,
/// classified as a series in d. Harmonic tents give 2 H_d, flagged divergent.
SeriesDiagnostic truncation_series(const std::string& name, int depth, std::uint64_t seed, double alpha);

}  // namespace halfvar

#endif
