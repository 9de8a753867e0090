#ifndef HALFVAR_ZAHORSKI_HPP
#define HALFVAR_ZAHORSKI_HPP

#include <optional>
#include <vector>

#include "halfvar/closed_set.hpp"
#include "halfvar/monotone_map.hpp"

namespace halfvar {

/// One contiguous interval (a_i, b_i) of F with its weight data.
///   psi(x) = m_i + gamma_i ((x - a_i)^{-1/2} + (b_i - x)^{-1/2})
/// m_i = tail_i^{-1/2}, where tail_i sums the lengths of this interval and all shorter
/// ones (ties broken by position), and gamma_i = m_i sqrt(b_i - a_i).
struct ZahorskiPiece {
  double a = 0.0;
  double b = 0.0;
  double m = 0.0;
  double gamma = 0.0;
  std::size_t rank = 0;  // position in decreasing-length order
};

/// phi(x) = alpha + (beta - alpha) k(x) / k(beta), k(x) = integral of psi over [alpha, x].
/// psi is infinite on F and positive everywhere, so phi is a homeomorphism of
/// [alpha, beta] with phi' = infinity on F; its inverse h has h' = 0 on phi(F).
/// An infinite F is replaced by the finite set of its depth-D cover endpoints.
class ZahorskiMap final : public MonotoneMap {
 public:
  ZahorskiMap(const ClosedSet& F, Interval ambient, std::optional<int> depth = {});

  Interval domain() const override { return ambient_; }
  Interval range() const override { return ambient_; }
  double operator()(double x) const override;
  std::optional<double> derivative(double x) const override;
  /// h = phi^{-1}. Solved from the nearer end of the gap for accuracy.
  double inverse(double y) const override;
  nlohmann::json pieces() const override;

  /// psi(x); empty on F.
  std::optional<double> psi(double x) const;
  /// h'(y) = (k(beta)/(beta - alpha)) / psi(h(y)); zero on phi(F).
  double inverse_derivative(double y) const;
  double inverse_second_derivative(double y) const;

  /// k(beta) = sum 1.4 m_i (b_i - a_i) <= 2.8 sqrt(beta - alpha).
  double k_total() const { return k_.back(); }
  const std::vector<ZahorskiPiece>& intervals() const { return pieces_; }
  const std::vector<double>& knots() const { return x_; }
  /// y -> (piece, offset from a_i, offset from b_i). The smaller offset is the
  /// one solved directly; the other is L minus it.
  std::size_t invert_local(double y, double& u, double& r) const;

 private:
  Interval ambient_;
  std::vector<double> x_;  // sorted F points: a_0 = alpha < ... < a_n = beta
  std::vector<ZahorskiPiece> pieces_;
  std::vector<double> k_;  // k at knots
  double scale_ = 1.0;     // (beta - alpha) / k(beta)
  std::vector<double> s_;  // phi at knots

  std::size_t locate(double x, double& u) const;
  /// Local antiderivative on piece i at offset u from a_i.
  double local_k(std::size_t i, double u) const;
  /// Offset t from either end with local_k(t) = target (local_k is symmetric).
  double solve_local(std::size_t i, double target) const;
  /// psi at offset u, with r = L - u, no cancellation.
  double psi_local(std::size_t i, double u, double r) const;
};

}  // namespace halfvar

#endif
