#include "halfvar/monotone_map.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace halfvar {

double bisect_increasing(const std::function<double(double)>& f, double lo, double hi, double y, int max_iter) {
  if (!(lo <= hi)) throw std::invalid_argument("bisect_increasing: empty bracket");
  for (int it = 0; it < max_iter; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double flo = f(lo), fhi = f(hi);
  return (y - flo) <= (fhi - y) ? lo : hi;
}

double MonotoneMap::inverse(double y) const {
  const Interval r = range();
  if (!(y >= r.lo && y <= r.hi)) throw std::domain_error("inverse: value outside range");
  const Interval d = domain();
  if (y == r.lo) return d.lo;
  if (y == r.hi) return d.hi;
  return bisect_increasing([this](double x) { return (*this)(x); }, d.lo, d.hi, y);
}

AffineMap::AffineMap(Interval from, Interval to) : from_(from), to_(to) {
  if (!(from.lo < from.hi && to.lo < to.hi)) throw std::invalid_argument("AffineMap: degenerate interval");
}

double AffineMap::operator()(double x) const {
  if (!(x >= from_.lo && x <= from_.hi)) throw std::domain_error("AffineMap: argument outside domain");
  if (x == from_.hi) return to_.hi;
  return to_.lo + (x - from_.lo) * (to_.length() / from_.length());
}

std::optional<double> AffineMap::derivative(double) const { return to_.length() / from_.length(); }

double AffineMap::inverse(double y) const {
  if (!(y >= to_.lo && y <= to_.hi)) throw std::domain_error("AffineMap: value outside range");
  if (y == to_.hi) return from_.hi;
  return from_.lo + (y - to_.lo) * (from_.length() / to_.length());
}

nlohmann::json AffineMap::pieces() const {
  return nlohmann::json::array({{{"kind", "affine"},
                                 {"interval", {from_.lo, from_.hi}},
                                 {"params", {{"image", {to_.lo, to_.hi}}}}}});
}

PiecewiseAffineMap::PiecewiseAffineMap(std::vector<double> xs, std::vector<double> ys) : x_(std::move(xs)), y_(std::move(ys)) {
  if (x_.size() < 2 || x_.size() != y_.size()) throw std::invalid_argument("PiecewiseAffineMap: bad knots");
  for (std::size_t j = 0; j + 1 < x_.size(); ++j) {
    if (!(x_[j] < x_[j + 1]) || !(y_[j] < y_[j + 1]))
      throw std::invalid_argument("PiecewiseAffineMap: knots must be strictly increasing");
  }
}

double PiecewiseAffineMap::operator()(double x) const {
  if (!(x >= x_.front() && x <= x_.back())) throw std::domain_error("PiecewiseAffineMap: argument outside domain");
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t j = std::min(static_cast<std::size_t>(it - x_.begin()), x_.size() - 1);
  j = j == 0 ? 0 : j - 1;
  if (x == x_[j]) return y_[j];
  return y_[j] + (y_[j + 1] - y_[j]) * ((x - x_[j]) / (x_[j + 1] - x_[j]));
}

std::optional<double> PiecewiseAffineMap::derivative(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t j = std::min(static_cast<std::size_t>(it - x_.begin()), x_.size() - 1);
  j = j == 0 ? 0 : j - 1;
  if (x == x_[j] && j > 0) {
    const double left = (y_[j] - y_[j - 1]) / (x_[j] - x_[j - 1]);
    const double right = (y_[j + 1] - y_[j]) / (x_[j + 1] - x_[j]);
    if (left != right) return std::nullopt;
  }
  return (y_[j + 1] - y_[j]) / (x_[j + 1] - x_[j]);
}

double PiecewiseAffineMap::inverse(double y) const {
  if (!(y >= y_.front() && y <= y_.back())) throw std::domain_error("PiecewiseAffineMap: value outside range");
  auto it = std::lower_bound(y_.begin(), y_.end(), y);
  std::size_t j = static_cast<std::size_t>(it - y_.begin());
  if (y_[j] == y) return x_[j];
  j -= 1;
  return x_[j] + (x_[j + 1] - x_[j]) * ((y - y_[j]) / (y_[j + 1] - y_[j]));
}

nlohmann::json PiecewiseAffineMap::pieces() const {
  auto arr = nlohmann::json::array();
  for (std::size_t j = 0; j + 1 < x_.size(); ++j) {
    arr.push_back({{"kind", "affine"}, {"interval", {x_[j], x_[j + 1]}}, {"params", {{"image", {y_[j], y_[j + 1]}}}}});
  }
  return arr;
}

double sqrt_pair(double u, double L) {
  u = std::clamp(u, 0.0, L);
  return std::sqrt(u) + u / (std::sqrt(L) + std::sqrt(L - u));
}

double sqrt_pair_inverse(double y, double L) {
  const double rl = std::sqrt(L);
  y = std::clamp(y, 0.0, 2.0 * rl);
  // q(u) + q(L - u) = 2 sqrt(L); past the midpoint solve for L - u, where the formula
  // below is well conditioned.
  if (y > rl) return L - sqrt_pair_inverse(2.0 * rl - y, L);
  // With s = sqrt(u), r = sqrt(L - u): s - r = y - sqrt(L) =: c and s^2 + r^2 = L.
  const double c = y - rl;
  const double big = std::sqrt(std::max(0.0, 2.0 * L - c * c));
  const double s = (2.0 * y * rl - y * y) / (big - c);
  return std::min(L, s * s);
}

}  // namespace halfvar
