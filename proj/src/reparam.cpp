#include "halfvar/reparam.hpp"

#include <algorithm>
#include <cmath>

namespace halfvar {

ArcLength arc_length_map(const Path& path) {
  if (!constancy_intervals(path).empty())
    throw std::invalid_argument("arc_length_map: path is constant on an interval; apply remove_constancy first");
  VariationFunction v(path);
  PiecewiseAffineMap vf(v.knots(), v.values());
  Path g0(v.values(), path.flat_values(), path.dimension());
  return {std::move(vf), std::move(g0)};
}

Path arc_length_carrier(const Path& values, const PiecewiseAffineMap& v) {
  std::vector<double> flat;
  flat.reserve(v.xs().size() * values.dimension());
  for (double t : v.xs()) {
    const Point p = values.evaluate(t);
    flat.insert(flat.end(), p.begin(), p.end());
  }
  return Path(v.ys(), std::move(flat), values.dimension());
}

ReparamRefused::ReparamRefused(Certificate cert)
    : std::runtime_error("compose_reparametrization: certificate verdict is " + to_string(cert.verdict) +
                         ", not certified; see the certificate for details"),
      cert_(std::move(cert)) {}

namespace {

Certificate certify_or_refuse(const Path& f, const ReparamOptions& opts) {
  CertifyOptions copts;
  copts.depth = opts.depth;
  copts.refutation = opts.refutation;
  auto cert = certify_vbg_half(f, opts.decomposition, copts);
  if (cert.verdict != Verdict::certified) throw ReparamRefused(cert);
  return cert;
}

}  // namespace

Reparametrization::Reparametrization(const Path& f, const ReparamOptions& opts)
    : f_(f),
      cert_(certify_or_refuse(f, opts)),
      ft_(remove_constancy(f)),
      vf_(std::make_unique<PiecewiseAffineMap>(arc_length_map(ft_).vf)),
      g0t_(arc_length_map(ft_).g0),
      g0_(arc_length_carrier(f_, *vf_)),
      depth_(opts.depth),
      merged_(opts.merge_sets) {
  ell_ = vf_->ys().back();
  kf_ = detect_K_f(ft_);

  // K points of f~ at working depth, with a reason each.
  std::vector<KfPoint> kpts = kf_.points;
  for (double p : kf_.set.points(depth_)) {
    if (std::none_of(kpts.begin(), kpts.end(), [p](const KfPoint& q) { return q.t == p; }))
      kpts.push_back({p, KfReason::accumulation});
  }
  std::sort(kpts.begin(), kpts.end(), [](const KfPoint& x, const KfPoint& y) { return x.t < y.t; });

  std::vector<std::size_t> owner(kpts.size(), 0);
  if (merged_) {
    sets_.assign(1, {});
  } else {
    const auto& props = cert_.sets;
    sets_.assign(props.size() + 1, {});
    for (std::size_t i = 0; i < kpts.size(); ++i) {
      owner[i] = props.size();
      for (std::size_t m = 0; m < props.size(); ++m) {
        if (props[m].set.contains(kpts[i].t)) {
          owner[i] = m;
          break;
        }
      }
    }
  }
  for (std::size_t i = 0; i < kpts.size(); ++i) sets_[owner[i]].push_back((*vf_)(kpts[i].t));
  // Drop empty sets and renumber.
  std::vector<std::size_t> renum(sets_.size(), 0);
  std::vector<std::vector<double>> kept;
  for (std::size_t m = 0; m < sets_.size(); ++m) {
    renum[m] = kept.size();
    if (!sets_[m].empty()) kept.push_back(std::move(sets_[m]));
  }
  sets_ = std::move(kept);

  std::vector<FracAccumulator> left, right;
  for (const auto& s : sets_) {
    std::vector<double> knots = s;
    knots.push_back(0.0);
    knots.push_back(ell_);
    left.emplace_back(knots, Side::left);
    right.emplace_back(knots, Side::right);
  }
  schedule_ = epsilon_schedule(left, right);

  std::vector<double> arcs;
  for (const auto& p : kpts) arcs.push_back((*vf_)(p.t));
  std::vector<OpenInterval> gaps;
  for (std::size_t i = 0; i + 1 < arcs.size(); ++i) gaps.push_back({arcs[i], arcs[i + 1]});
  derivative_bound_ratio_ = schedule_.derivative_bound_ratio(left, right, gaps);

  w_ = std::make_unique<WeightedSqrtMap>(std::move(left), schedule_.eps, ell_);

  const Interval dom = f_.domain();
  for (double a : arcs) F_.push_back(v_of_arc(a));
  F_.front() = dom.lo;
  F_.back() = dom.hi;
  phi_ = std::make_unique<ZahorskiMap>(ClosedSet::finite(F_), dom);
  aligned_ = phi_->knots().size() == w_->knots().size();

  for (std::size_t i = 0; i < kpts.size(); ++i) {
    CornerRecord c;
    c.t = kpts[i].t;
    c.arc = arcs[i];
    c.y = F_[i];
    c.s = (*phi_)(F_[i]);
    c.set = renum[owner[i]];
    c.C = 1.0 / (schedule_.eps[c.set] * schedule_.eps[c.set]);
    c.reason = kpts[i].reason;
    corners_.push_back(c);
  }
}

double Reparametrization::v_of_arc(double arc) const {
  const Interval dom = f_.domain();
  if (arc >= ell_) return dom.hi;
  return dom.lo + dom.length() * (w_->increment(arc) / w_->total_increment());
}

double Reparametrization::v(double t) const { return v_of_arc((*vf_)(t)); }

double Reparametrization::arc_of(double s) const {
  const Interval dom = f_.domain();
  if (aligned_) {
    // Offsets stay local to the gap, so rounding of y in absolute terms never
    // reaches the steep part of v^{-1}.
    double u = 0.0, r = 0.0;
    const std::size_t i = phi_->invert_local(s, u, r);
    const double c = w_->total_increment() / dom.length();
    if (r == 0.0) return w_->knots()[i + 1];
    return u <= r ? w_->inverse_in_gap(i, u * c, true) : w_->inverse_in_gap(i, r * c, false);
  }
  const double y = phi_->inverse(s);
  if (y >= dom.hi) return ell_;
  const double J = std::clamp((y - dom.lo) / dom.length() * w_->total_increment(), 0.0, w_->total_increment());
  return w_->inverse_increment(J);
}

double Reparametrization::homeo(double s) const { return vf_->inverse(arc_of(s)); }

Point Reparametrization::g(double s) const { return g0_.evaluate(arc_of(s)); }

Point Reparametrization::g_flat(double s) const { return g0t_.evaluate(arc_of(s)); }

double Reparametrization::flat_speed(double s) const {
  const double hp = phi_->inverse_derivative(s);
  if (hp == 0.0) return 0.0;
  const auto wp = w_->derivative(arc_of(s));
  if (!wp) return 0.0;
  return hp * (w_->total_increment() / f_.domain().length()) / *wp;
}

double Reparametrization::image_measure() const {
  const Interval dom = f_.domain();
  const auto gaps = kf_.set.contiguous_intervals(depth_, dom).intervals;
  double covered = 0.0;
  for (const auto& c : gaps) covered += v(c.hi) - v(c.lo);
  return std::max(0.0, dom.length() - covered);
}

nlohmann::json Reparametrization::diagnostics() const {
  nlohmann::json sets = nlohmann::json::array();
  for (const auto& s : sets_) sets.push_back(s.size());
  return {{"ell", ell_},
          {"depth", depth_},
          {"merged_sets", merged_},
          {"working_set_sizes", sets},
          {"eps", schedule_.eps},
          {"accumulator_totals", schedule_.accumulator_totals},
          {"condition_a_weighted_total", schedule_.weighted_total()},
          {"condition_b_worst_ratio", derivative_bound_ratio_},
          {"zahorski_k_total", phi_->k_total()},
          {"zahorski_k_bound", 2.8 * std::sqrt(f_.domain().length())},
          {"image_measure_estimate", image_measure()},
          {"F_size", F_.size()}};
}

nlohmann::json Reparametrization::to_json() const {
  nlohmann::json corners = nlohmann::json::array();
  for (const auto& c : corners_) {
    corners.push_back({{"t", c.t},
                       {"arc", c.arc},
                       {"v", c.y},
                       {"preimage", c.s},
                       {"set", c.set + 1},
                       {"C_x", c.C},
                       {"reason", to_string(c.reason)}});
  }
  return {{"domain", {f_.a(), f_.b()}},
          {"alpha_beta", {f_.a(), f_.b()}},
          {"certificate", cert_.to_json()},
          {"maps",
           {{"v_f", vf_->pieces()}, {"w", w_->pieces()}, {"phi", phi_->pieces()}, {"final_affine", "identity"}}},
          {"corners", corners},
          {"diagnostics", diagnostics()}};
}

Reparametrization compose_reparametrization(const Path& f, const ReparamOptions& opts) { return Reparametrization(f, opts); }

}  // namespace halfvar
