#ifndef HALFVAR_MONOTONE_MAP_HPP
#define HALFVAR_MONOTONE_MAP_HPP

#include <functional>
#include <optional>
#include <vector>

#include "halfvar/closed_set.hpp"
#include "json.hpp"

namespace halfvar {

/// Continuous strictly increasing real map with evaluation, derivative data where it is
/// finite, and inverse evaluation.
class MonotoneMap {
 public:
  virtual ~MonotoneMap() = default;

  virtual Interval domain() const = 0;
  virtual Interval range() const = 0;
  virtual double operator()(double x) const = 0;
  /// First derivative; empty where it is infinite or undefined (singular knots).
  virtual std::optional<double> derivative(double x) const = 0;
  /// Default: bisection (see bisect_increasing). Throws std::domain_error off range.
  virtual double inverse(double y) const;
  /// Piece catalog: [{"kind": "affine|sqrt|psi-integral|weighted-sum", "interval": [..], "params": {..}}].
  virtual nlohmann::json pieces() const = 0;
};

/// Solves f(x) = y for increasing f on [lo, hi] by bisection: stops when the bracket can no
/// longer shrink in floating point or after `max_iter` halvings.
double bisect_increasing(const std::function<double(double)>& f, double lo, double hi, double y, int max_iter = 200);

class AffineMap final : public MonotoneMap {
 public:
  AffineMap(Interval from, Interval to);
  Interval domain() const override { return from_; }
  Interval range() const override { return to_; }
  double operator()(double x) const override;
  std::optional<double> derivative(double) const override;
  double inverse(double y) const override;
  nlohmann::json pieces() const override;

 private:
  Interval from_, to_;
};

/// Continuous strictly increasing piecewise-affine map through (x_j, y_j).
class PiecewiseAffineMap final : public MonotoneMap {
 public:
  PiecewiseAffineMap(std::vector<double> xs, std::vector<double> ys);
  Interval domain() const override { return {x_.front(), x_.back()}; }
  Interval range() const override { return {y_.front(), y_.back()}; }
  double operator()(double x) const override;
  std::optional<double> derivative(double x) const override;
  double inverse(double y) const override;
  nlohmann::json pieces() const override;

  const std::vector<double>& xs() const { return x_; }
  const std::vector<double>& ys() const { return y_; }

 private:
  std::vector<double> x_, y_;
};

/// Local increment of the sqrt-pair piece on a gap of length L:
///   q(u) = sqrt(u) + sqrt(L) - sqrt(L - u),  0 <= u <= L,
/// written without cancellation. q(L) = 2 sqrt(L).
double sqrt_pair(double u, double L);
/// Closed-form inverse of sqrt_pair on [0, 2 sqrt(L)].
double sqrt_pair_inverse(double y, double L);

}  // namespace halfvar

#endif
