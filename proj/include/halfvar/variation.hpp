#ifndef HALFVAR_VARIATION_HPP
#define HALFVAR_VARIATION_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "halfvar/closed_set.hpp"
#include "halfvar/kf.hpp"
#include "halfvar/path.hpp"

namespace halfvar {

using ScalarFn = std::function<double(double)>;

struct VariationValue {
  double value = 0.0;
  std::optional<double> tail;  // analytic bound on the missing mass (generator paths)
  bool inconclusive = false;   // generator path without a tail bound
};

/// Sum of segment chord lengths, plus the generator's tail bound when there is one.
VariationValue total_variation(const Path& path);

/// V(f, [lo, hi]) summed over the segments meeting [lo, hi]. Unlike a difference of v_f
/// values this keeps relative accuracy on short intervals.
double interval_variation(const Path& path, double lo, double hi);

/// v_f(x) = V(f, [a, x]) as a piecewise-affine nondecreasing map.
class VariationFunction {
 public:
  explicit VariationFunction(const Path& path);

  double operator()(double t) const;
  /// Smallest t with v_f(t) = s.
  double inverse(double s) const;
  double total() const { return s_.back(); }
  bool strictly_increasing() const;

  const std::vector<double>& knots() const { return t_; }
  const std::vector<double>& values() const { return s_; }

 private:
  std::vector<double> t_;
  std::vector<double> s_;
};

VariationFunction variation_function(const Path& path);

/// Sum of |g(p_{k+1}) - g(p_k)|^alpha over consecutive points. For alpha in (0,1) this
/// is the supremum over non-overlapping collections with endpoints in the points: any
/// interval splits at intermediate points without decreasing the sum (triangle
/// inequality plus subadditivity of t^alpha).
double consecutive_power_sum(const ScalarFn& g, double alpha, std::span<const double> sorted_points);

/// Monotone partial-sum series with a growth classification. Divergence is never
/// reported as a bare infinity.
struct SeriesDiagnostic {
  enum class Kind { exact, convergent, divergent, undetermined };
  Kind kind = Kind::undetermined;
  std::vector<double> index;         // depth / truncation parameter per partial sum
  std::vector<double> partial_sums;  // nondecreasing
  double increment_exponent = 0.0;   // fitted p in increments ~ index^{-p}
  double log_coefficient = 0.0;      // fitted c in S ~ c ln(index) + const
  bool monotone = true;

  std::string kind_name() const;
  nlohmann::json to_json() const;
};

SeriesDiagnostic diagnose_series(std::vector<double> index, std::vector<double> partial_sums);

struct FracVarResult {
  double value = 0.0;  // at the requested depth
  int depth = 0;
  std::size_t points = 0;
  bool monotone_in_depth = true;  // value never decreased over depths 0..depth
  SeriesDiagnostic diagnostic;    // partial sums over the depth ladder
};

/// V_alpha(g, K) using the points of K enumerable at `depth`. The diagnostic ladder holds
/// the values at depths in `ladder` (default: every depth up to `depth` for infinite sets).
FracVarResult fractional_variation(const ScalarFn& g, double alpha, const ClosedSet& K, int depth,
                                   std::vector<int> ladder = {});

/// Exhaustive supremum over every collection of non-overlapping intervals with endpoints
/// in K. Refuses |K| > 12.
double fractional_variation_bruteforce(const ScalarFn& g, double alpha, std::span<const double> K);

/// Scalar view of a path (first coordinate).
ScalarFn scalar_view(const Path& path);

// ---------------------------------------------------------------------------------------
// VBG_{1/2} certification

enum class Verdict { certified, refuted, inconclusive };
std::string to_string(Verdict v);

struct SetReport {
  ClosedSet set;
  double v_half = 0.0;
  int depth = 0;
  bool finite_set = false;
  SeriesDiagnostic diagnostic;
};

/// One block of a Baire-category refutation: a Cantor block K^n_i together with the
/// contiguous intervals inside it (in enumeration order k = 1, 2, ...) and the analytic
/// closed form of sum_{k<=K} sqrt(V(v_f, host_k)).
struct WitnessBlock {
  int n = 0;
  int i = 0;
  Interval block;
  std::vector<OpenInterval> hosts;
  std::function<double(int)> analytic_sum;
};

struct RefutationSchema {
  std::string argument;
  std::vector<WitnessBlock> blocks;
};

struct Certificate {
  Verdict verdict = Verdict::inconclusive;
  VariationValue total_variation;
  std::vector<SetReport> sets;
  bool covers_kf = false;
  nlohmann::json witness = nlohmann::json::object();
  std::vector<std::string> notes;

  nlohmann::json to_json() const;
};

struct CertifyOptions {
  int depth = 8;
  /// Depth ladder used for the partial sums of infinite sets.
  std::vector<int> ladder;
  const RefutationSchema* refutation = nullptr;
};

/// Checks the bounded-variation clause, coverage of K_f by the proposed closed sets and
/// finiteness of V_{1/2}(v_f, A_m). Without a proposal, a finite K_f is its own
/// one-set decomposition; otherwise the verdict is inconclusive.
Certificate certify_vbg_half(const Path& path, std::optional<std::vector<ClosedSet>> proposed,
                             const CertifyOptions& opts);

}  // namespace halfvar

#endif
