#include "halfvar/zahorski.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace halfvar {

namespace {
// gamma_i = kSpikeWeight * m_i * sqrt(len_i). Smaller weights flatten the gaps' interiors
// at the cost of sharper shoulders near the knots.
constexpr double kSpikeWeight = 0.1;
}  // namespace

ZahorskiMap::ZahorskiMap(const ClosedSet& F, Interval ambient, std::optional<int> depth) : ambient_(ambient) {
  if (!(ambient.lo < ambient.hi)) throw std::invalid_argument("ZahorskiMap: degenerate interval");
  x_ = {ambient.lo, ambient.hi};
  for (double p : F.points(depth)) {
    if (p < ambient.lo || p > ambient.hi) throw std::invalid_argument("ZahorskiMap: F leaves the interval");
    x_.push_back(p);
  }
  std::sort(x_.begin(), x_.end());
  x_.erase(std::unique(x_.begin(), x_.end()), x_.end());

  const std::size_t n = x_.size() - 1;
  pieces_.resize(n);
  for (std::size_t i = 0; i < n; ++i) pieces_[i] = {x_[i], x_[i + 1], 0.0, 0.0, 0};
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) {
    return pieces_[p].b - pieces_[p].a > pieces_[q].b - pieces_[q].a;
  });
  // Tails summed from the shortest interval upward.
  double tail = 0.0;
  for (std::size_t r = n; r-- > 0;) {
    ZahorskiPiece& p = pieces_[order[r]];
    tail += p.b - p.a;
    p.rank = r;
    p.m = 1.0 / std::sqrt(tail);
    p.gamma = kSpikeWeight * p.m * std::sqrt(p.b - p.a);
  }
  k_.assign(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) k_[i + 1] = k_[i] + local_k(i, pieces_[i].b - pieces_[i].a);
  scale_ = ambient_.length() / k_.back();
  s_.resize(k_.size());
  for (std::size_t i = 0; i < k_.size(); ++i) s_[i] = ambient_.lo + scale_ * k_[i];
  s_.back() = ambient_.hi;
}

std::size_t ZahorskiMap::locate(double x, double& u) const {
  if (!(x >= ambient_.lo && x <= ambient_.hi)) throw std::domain_error("ZahorskiMap: argument outside domain");
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t j = static_cast<std::size_t>(it - x_.begin());
  j = std::min(j == 0 ? 0 : j - 1, pieces_.size() - 1);
  u = x - x_[j];
  return j;
}

double ZahorskiMap::local_k(std::size_t i, double u) const {
  const ZahorskiPiece& p = pieces_[i];
  return p.m * u + 2.0 * p.gamma * sqrt_pair(u, p.b - p.a);
}

double ZahorskiMap::psi_local(std::size_t i, double u, double r) const {
  const ZahorskiPiece& p = pieces_[i];
  return p.m + p.gamma * (1.0 / std::sqrt(u) + 1.0 / std::sqrt(r));
}

double ZahorskiMap::operator()(double x) const {
  if (x == ambient_.hi) return ambient_.hi;
  double u = 0.0;
  const std::size_t i = locate(x, u);
  const double L = pieces_[i].b - pieces_[i].a;
  const double r = L - u;
  // The local antiderivative is symmetric, so evaluate from the nearer end.
  return u <= r ? s_[i] + scale_ * local_k(i, u) : s_[i + 1] - scale_ * local_k(i, r);
}

std::optional<double> ZahorskiMap::psi(double x) const {
  double u = 0.0;
  const std::size_t i = locate(x, u);
  const double r = (pieces_[i].b - pieces_[i].a) - u;
  if (u <= 0.0 || r <= 0.0) return std::nullopt;
  return psi_local(i, u, r);
}

std::optional<double> ZahorskiMap::derivative(double x) const {
  const auto p = psi(x);
  if (!p) return std::nullopt;
  return scale_ * *p;
}

double ZahorskiMap::solve_local(std::size_t i, double target) const {
  const ZahorskiPiece& p = pieces_[i];
  const double L = p.b - p.a;
  if (target <= 0.0) return 0.0;
  // Bisection in s = sqrt(t): keeps relative accuracy when t is tiny.
  double lo = 0.0, hi = std::sqrt(L);
  for (int it = 0; it < 200; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (local_k(i, mid * mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double t_lo = lo * lo, t_hi = hi * hi;
  const double best = (target - local_k(i, t_lo)) <= (local_k(i, t_hi) - target) ? t_lo : t_hi;
  return std::min(best, L);
}

std::size_t ZahorskiMap::invert_local(double y, double& u, double& r) const {
  if (!(y >= ambient_.lo && y <= ambient_.hi)) throw std::domain_error("ZahorskiMap: value outside range");
  auto it = std::upper_bound(s_.begin(), s_.end(), y);
  std::size_t i = static_cast<std::size_t>(it - s_.begin());
  i = std::min(i == 0 ? 0 : i - 1, pieces_.size() - 1);
  const double L = pieces_[i].b - pieces_[i].a;
  // Differences against the stored knot images are exact near a knot.
  const double left = std::max(0.0, y - s_[i]) / scale_;
  const double right = std::max(0.0, s_[i + 1] - y) / scale_;
  if (y == ambient_.hi) {
    u = L;
    r = 0.0;
  } else if (left <= right) {
    u = solve_local(i, left);
    r = L - u;
  } else {
    r = solve_local(i, right);
    u = L - r;
  }
  return i;
}

double ZahorskiMap::inverse(double y) const {
  double u = 0.0, r = 0.0;
  const std::size_t i = invert_local(y, u, r);
  if (r == 0.0) return pieces_[i].b;
  return u <= r ? pieces_[i].a + u : pieces_[i].b - r;
}

double ZahorskiMap::inverse_derivative(double y) const {
  double u = 0.0, r = 0.0;
  const std::size_t i = invert_local(y, u, r);
  if (u <= 0.0 || r <= 0.0) return 0.0;
  return 1.0 / (scale_ * psi_local(i, u, r));
}

double ZahorskiMap::inverse_second_derivative(double y) const {
  double u = 0.0, r = 0.0;
  const std::size_t i = invert_local(y, u, r);
  // One-sided limits differ at knots.
  if (u <= 0.0 || r <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  const ZahorskiPiece& p = pieces_[i];
  const double d1 = scale_ * psi_local(i, u, r);
  const double d2 = scale_ * p.gamma * 0.5 * (1.0 / (r * std::sqrt(r)) - 1.0 / (u * std::sqrt(u)));
  return -d2 / (d1 * d1 * d1);
}

nlohmann::json ZahorskiMap::pieces() const {
  auto arr = nlohmann::json::array();
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    arr.push_back({{"kind", "psi-integral"},
                   {"interval", {p.a, p.b}},
                   {"params", {{"m", p.m}, {"gamma", p.gamma}, {"rank", p.rank}, {"k", {k_[i], k_[i + 1]}}}}});
  }
  return arr;
}

}  // namespace halfvar
