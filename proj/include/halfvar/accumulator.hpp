#ifndef HALFVAR_ACCUMULATOR_HPP
#define HALFVAR_ACCUMULATOR_HPP

#include <optional>
#include <vector>

#include "halfvar/closed_set.hpp"
#include "halfvar/monotone_map.hpp"

namespace halfvar {

enum class Side { left, right };

/// Fractional accumulator of a closed set A inside [0, ell], on knots P = A ∪ {0, ell}.
///
///   left:  v(x) = sum over knots p_{k+1} <= x of sqrt(p_{k+1} - p_k) + sqrt(x - z),
///          z = max(P ∩ [0, x])
///   right: v(x) = sum over knots p_k >= x of sqrt(p_{k+1} - p_k) + sqrt(z - x),
///          z = min(P ∩ [x, ell])
///
/// The left one increases, the right one decreases; both are continuous and smooth off P.
/// An infinite A is enumerated at the given depth, which approximates v from below.
class FracAccumulator {
 public:
  FracAccumulator(const ClosedSet& A, double ell, Side side, std::optional<int> depth = {});
  FracAccumulator(std::vector<double> knots, Side side);

  Side side() const { return side_; }
  double operator()(double x) const;
  /// Empty at knots (infinite one-sided derivative there).
  std::optional<double> derivative(double x) const;
  std::optional<double> second_derivative(double x) const;

  /// v(ell) for the left accumulator, v(0) for the right one. Both equal sum sqrt(gaps).
  double total() const { return prefix_.back(); }
  const std::vector<double>& knots() const { return p_; }
  /// prefix()[j] = sum_{k<j} sqrt(p_{k+1} - p_k).
  const std::vector<double>& prefix() const { return prefix_; }

  /// Gap index j with p_j <= x <= p_{j+1} and local offset u = x - p_j.
  std::size_t locate(double x, double& u) const;
  /// v_left(x) - v_left(0) + v_right(0) - v_right(x) = 2 S_j + q(u), the increment of the
  /// pair difference, evaluated without cancellation.
  double pair_increment(double x) const;
  /// pair_increment(z) - pair_increment(y), written without cancellation when y and z share
  /// a gap.
  double pair_difference(double y, double z) const;
  /// v(z) - v(y), without cancellation when y and z share a gap.
  double difference(double y, double z) const;

 private:
  std::vector<double> p_;
  std::vector<double> prefix_;
  Side side_ = Side::left;
  void build();
};

/// eps_m = 2^{-m} / ((1 + v_m(ell) + ~v_m(0)) (1 + m^{3/2})), m = 1-based set index.
struct EpsilonSchedule {
  std::vector<double> eps;
  std::vector<double> accumulator_totals;  // v_m(ell) + ~v_m(0)

  /// sum eps_m (v_m(ell) + ~v_m(0)); finite and at most 1.
  double weighted_total() const;
  /// Grid recheck of the derivative bound: for every m, at the points of a uniform
  /// `grid` on [0, ell] lying in some [c + 1/m, d - 1/m] with (c, d) a contiguous interval
  /// of K, eps_m |v_m^{(i)}| and eps_m |~v_m^{(i)}| stay below 2^{-m} for i = 1, 2.
  /// Returns the worst ratio to 2^{-m} (0 when no grid point qualifies).
  double derivative_bound_ratio(const std::vector<FracAccumulator>& left, const std::vector<FracAccumulator>& right,
                                const std::vector<OpenInterval>& contiguous, int grid = 10000) const;
};

EpsilonSchedule epsilon_schedule(const std::vector<FracAccumulator>& left, const std::vector<FracAccumulator>& right);

/// w = sum_m eps_m (v_m - ~v_m) on [0, ell]. Evaluated as w(0) + sum eps_m (2 S_j + q(u))
/// per set; inverse in closed form for one set, by bisection inside a knot gap otherwise.
class WeightedSqrtMap final : public MonotoneMap {
 public:
  WeightedSqrtMap(std::vector<FracAccumulator> left, std::vector<double> eps, double ell);

  Interval domain() const override { return {0.0, ell_}; }
  Interval range() const override { return {w0_, w0_ + total_increment_}; }
  double operator()(double x) const override { return w0_ + increment(x); }
  std::optional<double> derivative(double x) const override;
  std::optional<double> second_derivative(double x) const;
  double inverse(double y) const override { return inverse_increment(y - w0_); }
  nlohmann::json pieces() const override;

  /// w(x) - w(0), computed without cancellation.
  double increment(double x) const;
  double inverse_increment(double J) const;
  /// Inverse inside gap j given the increment offset d from its left knot
  /// (from_left) or from its right knot. Keeps relative precision near knots.
  double inverse_in_gap(std::size_t j, double d, bool from_left) const;
  /// w(z) - w(y).
  double difference(double y, double z) const;
  double total_increment() const { return total_increment_; }
  double w0() const { return w0_; }
  const std::vector<double>& eps() const { return eps_; }
  const std::vector<FracAccumulator>& accumulators() const { return acc_; }
  /// Union of all knots.
  const std::vector<double>& knots() const { return knots_; }

 private:
  std::vector<FracAccumulator> acc_;
  std::vector<double> eps_;
  double ell_ = 0.0;
  double w0_ = 0.0;
  double total_increment_ = 0.0;
  std::vector<double> knots_;
  std::vector<double> knot_increment_;
};

}  // namespace halfvar

#endif
