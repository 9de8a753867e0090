#ifndef HALFVAR_REPARAM_HPP
#define HALFVAR_REPARAM_HPP

#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "halfvar/accumulator.hpp"
#include "halfvar/kf.hpp"
#include "halfvar/monotone_map.hpp"
#include "halfvar/path.hpp"
#include "halfvar/variation.hpp"
#include "halfvar/zahorski.hpp"

namespace halfvar {

struct ArcLength {
  PiecewiseAffineMap vf;  // v_f : [a,b] -> [0, ell]
  Path g0;                // f o v_f^{-1} on [0, ell], unit speed
};

/// Throws std::invalid_argument naming remove_constancy when the path has a constancy
/// interval.
ArcLength arc_length_map(const Path& path);

/// Polyline through (v(t_j), values(t_j)) over the knots t_j of v. With v the arc length
/// of f~ and values = f this is f o v^{-1}.
Path arc_length_carrier(const Path& values, const PiecewiseAffineMap& v);

class ReparamRefused : public std::runtime_error {
 public:
  explicit ReparamRefused(Certificate cert);
  const Certificate& certificate() const { return cert_; }

 private:
  Certificate cert_;
};

struct ReparamOptions {
  int depth = 8;
  /// Decomposition to certify; empty means the automatic one.
  std::optional<std::vector<ClosedSet>> decomposition;
  const RefutationSchema* refutation = nullptr;
  /// Join all sets into one working set A_1 (keeps eps_1 representable); otherwise one
  /// accumulator per certified set plus one for the remaining corners of f~.
  bool merge_sets = true;
};

struct CornerRecord {
  double t = 0.0;      // parameter in [a,b]
  double arc = 0.0;    // v~_f(t)
  double y = 0.0;      // v(t) in [alpha, beta]
  double s = 0.0;      // preimage under h: phi(y)
  std::size_t set = 0; // working set index m (0-based)
  double C = 0.0;      // eps_m^{-2}
  KfReason reason = KfReason::endpoint;
};

/// g = f o v^{-1} o h on [a,b] with [alpha, beta] = [a, b]. Constancy intervals are
/// flattened internally (f~ = remove_constancy(f)); v is built from f~ and g keeps the
/// values of f, which are constant where f~ has tents.
class Reparametrization {
 public:
  Reparametrization(const Path& f, const ReparamOptions& opts);

  const Path& original() const { return f_; }
  const Path& flattened() const { return ft_; }
  const Certificate& certificate() const { return cert_; }
  const KfSet& kf() const { return kf_; }
  const PiecewiseAffineMap& vf() const { return *vf_; }
  const WeightedSqrtMap& w() const { return *w_; }
  const ZahorskiMap& phi() const { return *phi_; }
  const EpsilonSchedule& schedule() const { return schedule_; }
  const std::vector<CornerRecord>& corners() const { return corners_; }
  /// Working sets in arc coordinates.
  const std::vector<std::vector<double>>& working_sets() const { return sets_; }
  double ell() const { return ell_; }
  Interval domain() const { return f_.domain(); }
  /// Arc-length polyline of f~ and the carrier of f's values on the same knots.
  const Path& g0() const { return g0t_; }
  const Path& g0_values() const { return g0_; }

  /// Normalized v = a + (b - a)(w(v~_f(t)) - w(0)) / (w(ell) - w(0)).
  double v(double t) const;
  double v_of_arc(double arc) const;
  /// Arc coordinate u(s) = w^{-1}(...) of h(s).
  double arc_of(double s) const;
  /// Composed homeomorphism v^{-1} o h : [a,b] -> [a,b].
  double homeo(double s) const;
  Point g(double s) const;
  /// f~ o (v^{-1} o h).
  Point g_flat(double s) const;
  /// |(f~ o v^{-1} o h)'(s)| by the chain rule through the piece catalog.
  double flat_speed(double s) const;
  /// image_measure_estimate of v(K_f~): (beta - alpha) minus the images of the gaps.
  double image_measure() const;

  nlohmann::json diagnostics() const;
  nlohmann::json to_json() const;

 private:
  Path f_;
  Certificate cert_;  // before ft_: refusal happens before any map is built
  Path ft_;
  KfSet kf_;
  std::unique_ptr<PiecewiseAffineMap> vf_;
  Path g0t_;
  Path g0_;
  double ell_ = 0.0;
  std::vector<std::vector<double>> sets_;
  EpsilonSchedule schedule_;
  std::unique_ptr<WeightedSqrtMap> w_;
  std::unique_ptr<ZahorskiMap> phi_;
  std::vector<CornerRecord> corners_;
  std::vector<double> F_;
  bool aligned_ = false;  // phi pieces and w gaps share an index
  double derivative_bound_ratio_ = 0.0;
  int depth_ = 0;
  bool merged_ = true;
};

/// Builds the reparametrization; throws ReparamRefused unless the certificate verdict is
/// certified.
Reparametrization compose_reparametrization(const Path& f, const ReparamOptions& opts);

}  // namespace halfvar

#endif
