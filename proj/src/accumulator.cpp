#include "halfvar/accumulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace halfvar {

FracAccumulator::FracAccumulator(const ClosedSet& A, double ell, Side side, std::optional<int> depth) : side_(side) {
  if (!(ell > 0.0)) throw std::invalid_argument("FracAccumulator: ell must be positive");
  p_ = {0.0, ell};
  for (double x : A.points(depth)) {
    if (x < 0.0 || x > ell) throw std::invalid_argument("FracAccumulator: set leaves [0, ell]");
    p_.push_back(x);
  }
  build();
}

FracAccumulator::FracAccumulator(std::vector<double> knots, Side side) : p_(std::move(knots)), side_(side) { build(); }

void FracAccumulator::build() {
  std::sort(p_.begin(), p_.end());
  p_.erase(std::unique(p_.begin(), p_.end()), p_.end());
  if (p_.size() < 2) throw std::invalid_argument("FracAccumulator: need at least two knots");
  prefix_.assign(p_.size(), 0.0);
  for (std::size_t j = 0; j + 1 < p_.size(); ++j) prefix_[j + 1] = prefix_[j] + std::sqrt(p_[j + 1] - p_[j]);
}

std::size_t FracAccumulator::locate(double x, double& u) const {
  if (!(x >= p_.front() && x <= p_.back())) throw std::domain_error("FracAccumulator: argument outside [0, ell]");
  auto it = std::upper_bound(p_.begin(), p_.end(), x);
  std::size_t j = static_cast<std::size_t>(it - p_.begin());
  j = std::min(j == 0 ? 0 : j - 1, p_.size() - 2);
  u = x - p_[j];
  return j;
}

double FracAccumulator::operator()(double x) const {
  double u = 0.0;
  const std::size_t j = locate(x, u);
  const double L = p_[j + 1] - p_[j];
  if (side_ == Side::left) return prefix_[j] + std::sqrt(u);
  return (prefix_.back() - prefix_[j + 1]) + std::sqrt(std::max(0.0, L - u));
}

std::optional<double> FracAccumulator::derivative(double x) const {
  double u = 0.0;
  const std::size_t j = locate(x, u);
  const double r = (p_[j + 1] - p_[j]) - u;
  if (side_ == Side::left) {
    if (u <= 0.0) return std::nullopt;
    return 0.5 / std::sqrt(u);
  }
  if (r <= 0.0) return std::nullopt;
  return -0.5 / std::sqrt(r);
}

std::optional<double> FracAccumulator::second_derivative(double x) const {
  double u = 0.0;
  const std::size_t j = locate(x, u);
  const double r = (p_[j + 1] - p_[j]) - u;
  const double z = side_ == Side::left ? u : r;
  if (z <= 0.0) return std::nullopt;
  return -0.25 / (z * std::sqrt(z));
}

double FracAccumulator::pair_increment(double x) const {
  double u = 0.0;
  const std::size_t j = locate(x, u);
  return 2.0 * prefix_[j] + sqrt_pair(u, p_[j + 1] - p_[j]);
}

double FracAccumulator::pair_difference(double y, double z) const {
  if (y == z) return 0.0;
  if (z < y) return -pair_difference(z, y);
  double uy = 0.0, uz = 0.0;
  const std::size_t jy = locate(y, uy);
  const std::size_t jz = locate(z, uz);
  if (jy != jz) return pair_increment(z) - pair_increment(y);
  const double L = p_[jy + 1] - p_[jy];
  const double d = z - y;
  return d / (std::sqrt(uz) + std::sqrt(uy)) + d / (std::sqrt(std::max(0.0, L - uy)) + std::sqrt(std::max(0.0, L - uz)));
}

double FracAccumulator::difference(double y, double z) const {
  if (y == z) return 0.0;
  double uy = 0.0, uz = 0.0;
  std::size_t jy = locate(y, uy);
  std::size_t jz = locate(z, uz);
  // A knot belongs to both neighbouring gaps; pick the one shared with the other point.
  if (jy + 1 == jz && uy == p_[jy + 1] - p_[jy]) {
    jy = jz;
    uy = 0.0;
  }
  if (jy + 1 == jz && uz == 0.0) {
    jz = jy;
    uz = p_[jy + 1] - p_[jy];
  }
  if (jy != jz) return (*this)(z) - (*this)(y);
  const double L = p_[jy + 1] - p_[jy];
  const double d = z - y;
  if (side_ == Side::left) {
    if (uy == 0.0) return std::sqrt(uz);
    return d / (std::sqrt(uz) + std::sqrt(uy));
  }
  if (uz == L) return -std::sqrt(L - uy);
  return -d / (std::sqrt(std::max(0.0, L - uy)) + std::sqrt(std::max(0.0, L - uz)));
}

double EpsilonSchedule::weighted_total() const {
  double s = 0.0;
  for (std::size_t m = 0; m < eps.size(); ++m) s += eps[m] * accumulator_totals[m];
  return s;
}

EpsilonSchedule epsilon_schedule(const std::vector<FracAccumulator>& left, const std::vector<FracAccumulator>& right) {
  if (left.size() != right.size()) throw std::invalid_argument("epsilon_schedule: unpaired accumulators");
  EpsilonSchedule out;
  for (std::size_t k = 0; k < left.size(); ++k) {
    const double m = static_cast<double>(k + 1);
    const double tot = left[k].total() + right[k].total();
    out.accumulator_totals.push_back(tot);
    out.eps.push_back(std::ldexp(1.0, -static_cast<int>(k + 1)) / ((1.0 + tot) * (1.0 + m * std::sqrt(m))));
  }
  return out;
}

double EpsilonSchedule::derivative_bound_ratio(const std::vector<FracAccumulator>& left,
                                               const std::vector<FracAccumulator>& right,
                                               const std::vector<OpenInterval>& contiguous, int grid) const {
  if (left.empty() || contiguous.empty()) return 0.0;
  const double ell = left.front().knots().back();
  double worst = 0.0;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    const double inv_m = 1.0 / static_cast<double>(k + 1);
    const double bound = std::ldexp(1.0, -static_cast<int>(k + 1));
    for (int g = 0; g <= grid; ++g) {
      const double x = ell * (static_cast<double>(g) / grid);
      auto it = std::upper_bound(contiguous.begin(), contiguous.end(), x,
                                 [](double t, const OpenInterval& c) { return t < c.lo; });
      if (it == contiguous.begin()) continue;
      const OpenInterval& c = *(it - 1);
      if (!(x >= c.lo + inv_m && x <= c.hi - inv_m)) continue;
      for (const FracAccumulator* a : {&left[k], &right[k]}) {
        const auto d1 = a->derivative(x);
        const auto d2 = a->second_derivative(x);
        if (!d1 || !d2) return INFINITY;
        worst = std::max(worst, eps[k] * std::max(std::abs(*d1), std::abs(*d2)) / bound);
      }
    }
  }
  return worst;
}

WeightedSqrtMap::WeightedSqrtMap(std::vector<FracAccumulator> left, std::vector<double> eps, double ell)
    : acc_(std::move(left)), eps_(std::move(eps)), ell_(ell) {
  if (acc_.empty() || acc_.size() != eps_.size()) throw std::invalid_argument("WeightedSqrtMap: need one weight per set");
  for (std::size_t m = 0; m < acc_.size(); ++m) {
    if (acc_[m].knots().back() != ell_) throw std::invalid_argument("WeightedSqrtMap: accumulator domain mismatch");
    w0_ -= eps_[m] * acc_[m].total();
    total_increment_ += eps_[m] * 2.0 * acc_[m].total();
    knots_.insert(knots_.end(), acc_[m].knots().begin(), acc_[m].knots().end());
  }
  std::sort(knots_.begin(), knots_.end());
  knots_.erase(std::unique(knots_.begin(), knots_.end()), knots_.end());
  knot_increment_.reserve(knots_.size());
  for (double k : knots_) knot_increment_.push_back(increment(k));
  knot_increment_.back() = total_increment_;
}

double WeightedSqrtMap::increment(double x) const {
  double s = 0.0;
  for (std::size_t m = 0; m < acc_.size(); ++m) s += eps_[m] * acc_[m].pair_increment(x);
  return s;
}

double WeightedSqrtMap::difference(double y, double z) const {
  double s = 0.0;
  for (std::size_t m = 0; m < acc_.size(); ++m) s += eps_[m] * acc_[m].pair_difference(y, z);
  return s;
}

std::optional<double> WeightedSqrtMap::derivative(double x) const {
  double s = 0.0;
  for (std::size_t m = 0; m < acc_.size(); ++m) {
    double u = 0.0;
    const std::size_t j = acc_[m].locate(x, u);
    const double r = (acc_[m].knots()[j + 1] - acc_[m].knots()[j]) - u;
    if (u <= 0.0 || r <= 0.0) return std::nullopt;
    s += eps_[m] * (0.5 / std::sqrt(u) + 0.5 / std::sqrt(r));
  }
  return s;
}

std::optional<double> WeightedSqrtMap::second_derivative(double x) const {
  double s = 0.0;
  for (std::size_t m = 0; m < acc_.size(); ++m) {
    double u = 0.0;
    const std::size_t j = acc_[m].locate(x, u);
    const double r = (acc_[m].knots()[j + 1] - acc_[m].knots()[j]) - u;
    if (u <= 0.0 || r <= 0.0) return std::nullopt;
    s += eps_[m] * (-0.25 / (u * std::sqrt(u)) + 0.25 / (r * std::sqrt(r)));
  }
  return s;
}

double WeightedSqrtMap::inverse_increment(double J) const {
  if (!(J >= 0.0 && J <= total_increment_)) throw std::domain_error("WeightedSqrtMap: value outside range");
  auto it = std::upper_bound(knot_increment_.begin(), knot_increment_.end(), J);
  std::size_t j = static_cast<std::size_t>(it - knot_increment_.begin());
  j = std::min(j == 0 ? 0 : j - 1, knots_.size() - 2);
  if (J == knot_increment_[j]) return knots_[j];
  const double L = knots_[j + 1] - knots_[j];
  if (acc_.size() == 1) {
    const double yl = (J - knot_increment_[j]) / eps_[0];
    const double yr = (knot_increment_[j + 1] - J) / eps_[0];
    if (yl <= yr) return knots_[j] + sqrt_pair_inverse(yl, L);
    return knots_[j + 1] - sqrt_pair_inverse(yr, L);
  }
  const double base = knots_[j];
  const double u = bisect_increasing([&](double v) { return increment(base + v); }, 0.0, L, J);
  return base + u;
}

double WeightedSqrtMap::inverse_in_gap(std::size_t j, double d, bool from_left) const {
  if (j + 1 >= knots_.size()) throw std::out_of_range("WeightedSqrtMap: gap index");
  const double span = knot_increment_[j + 1] - knot_increment_[j];
  d = std::clamp(d, 0.0, span);
  const double L = knots_[j + 1] - knots_[j];
  if (acc_.size() == 1) {
    const double u = sqrt_pair_inverse(d / eps_[0], L);
    return from_left ? knots_[j] + u : knots_[j + 1] - u;
  }
  return inverse_increment(from_left ? knot_increment_[j] + d : knot_increment_[j + 1] - d);
}

nlohmann::json WeightedSqrtMap::pieces() const {
  auto arr = nlohmann::json::array();
  for (std::size_t j = 0; j + 1 < knots_.size(); ++j) {
    arr.push_back({{"kind", "weighted-sum"},
                   {"interval", {knots_[j], knots_[j + 1]}},
                   {"params", {{"increment", {knot_increment_[j], knot_increment_[j + 1]}}, {"sets", acc_.size()}}}});
  }
  return arr;
}

}  // namespace halfvar
