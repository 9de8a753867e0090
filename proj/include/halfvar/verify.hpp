#ifndef HALFVAR_VERIFY_HPP
#define HALFVAR_VERIFY_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "halfvar/accumulator.hpp"
#include "halfvar/closed_set.hpp"
#include "halfvar/path.hpp"
#include "halfvar/rational.hpp"

namespace halfvar {

using PathFn = std::function<Point(double)>;

/// t = 2^{-6}, ..., 2^{-20}.
std::vector<double> standard_ladder();
/// Cauchy tolerance at step t: max(1e-5, 10 t).
double ladder_tolerance(double t);

/// Rungs t <= scale, always keeping the finest min_rungs. Used at a corner with scale =
/// distance to the nearest other corner, so coarse rungs do not straddle its neighbours.
std::vector<double> local_ladder(const std::vector<double>& ladder, double scale, std::size_t min_rungs = 4);

enum class DiffVerdict { exists, not_differentiable, inconclusive };
std::string to_string(DiffVerdict v);

struct DiffReport {
  int order = 1;
  double x = 0.0;
  std::vector<double> steps;
  std::vector<Point> forward;   // (g(x+t) - g(x)) / t            (order 1)
  std::vector<Point> backward;  // (g(x) - g(x-t)) / t            (order 1)
  std::vector<Point> quotient;  // central quotient per rung (one-sided at endpoints)
  std::vector<double> gaps;     // |quotient[j+1] - quotient[j]|
  DiffVerdict verdict = DiffVerdict::inconclusive;
  Point estimate;
  std::size_t estimate_rung = 0;
  /// Order 2 at flat points: |g'(x+t) - g'(x)| / |t| per rung, max over both sides.
  std::vector<double> lipschitz;
  bool lipschitz_checked = false;
  bool second_derivative_zero = false;

  /// max(|forward|, |backward|) at the bottom rung.
  double one_sided_bottom() const;
  nlohmann::json to_json() const;
};

DiffReport fd_first_derivative(const PathFn& g, Interval domain, double x,
                               const std::vector<double>& ladder = standard_ladder());

/// Second symmetric differences with the Cauchy verdict. With `flat_point` the paper's
/// route is also run: g'(x) taken from fd_first_derivative, then |g'(x+t) - g'(x)| / |t|
/// recorded per rung; g''(x) = 0 is reported when these quotients end below 1e-3 and
/// never grow by more than a factor 4 per rung.
DiffReport fd_second_derivative(const PathFn& g, Interval domain, double x,
                                const std::vector<double>& ladder = standard_ladder(), bool flat_point = false);

/// |g(x +- t) - g(x)| / t^2 per rung (max of both sides) and whether it never grows by
/// more than `factor` between successive rungs.
struct QuadraticBound {
  std::vector<double> ratios;
  bool bounded = true;
  double max_ratio = 0.0;
};
QuadraticBound quadratic_ratio(const PathFn& g, Interval domain, double x,
                               const std::vector<double>& ladder = standard_ladder(), double factor = 4.0);

/// Seeded uniform test points at least guard * |domain| away from every corner, rounded
/// to multiples of 2^-30 so that x +- t is exact on every ladder rung.
std::vector<double> off_corner_points(Interval domain, const std::vector<double>& corners, std::size_t count,
                                      std::uint64_t seed, double guard = 1e-3);

/// Sampled check of |g0(y) - g0(z)| <= C |m(z) - m(y)| (|m(z) - m(x)| + |m(y) - m(x)|)
/// for y, z on one side of the arc coordinate x. g0 is a unit-speed polyline.
struct VartimesReport {
  double x = 0.0;
  double C = 0.0;
  std::size_t samples = 0;
  std::size_t failures = 0;
  double max_ratio = 0.0;  // max of lhs / (C rhs)
  bool pass = true;
  nlohmann::json to_json() const;
};

/// Stable difference m(z) - m(y) of a monotone map.
using DiffFn = std::function<double(double, double)>;

/// Relative slack allowed for rounding: a pair fails when lhs > C rhs (1 + 1e-9).
inline constexpr double kVartimesSlack = 1e-9;

VartimesReport check_vartimes(const Path& g0, const DiffFn& right_diff, const DiffFn& left_diff, double x, double C,
                              std::size_t samples, std::uint64_t seed);

/// The w-form: both sides use w.
VartimesReport check_vartimes_w(const Path& g0, const WeightedSqrtMap& w, double x, double C, std::size_t samples,
                                std::uint64_t seed);
/// The accumulator form: v_m on the right of x, ~v_m on the left, C = 1.
VartimesReport check_intm(const Path& g0, const FracAccumulator& left, const FracAccumulator& right, double x,
                          std::size_t samples, std::uint64_t seed);

/// |g0(z) - g0(y)|, exact |z - y| times the segment speed when both lie on one segment.
double polyline_displacement(const Path& g0, double y, double z);

/// (range length) - sum of |map(d) - map(c)| over the contiguous intervals (c, d) of the
/// set inside `ambient` at `depth`. Upper estimate of the measure of map(set).
double image_measure_estimate(const std::function<double(double)>& map, const ClosedSet& set, int depth,
                              Interval ambient, Interval range);

/// 1 - sum of gap lengths of the unit Cantor set at depth D, in exact arithmetic.
Rational cantor_identity_measure_exact(int depth);

}  // namespace halfvar

#endif
