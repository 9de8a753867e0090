#include "halfvar/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace halfvar {

namespace {

double norm(const Point& p) {
  double s = 0.0;
  for (double x : p) s += x * x;
  return std::sqrt(s);
}

Point combine(const Point& a, double ca, const Point& b, double cb) {
  Point out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = ca * a[k] + cb * b[k];
  return out;
}

double dist(const Point& a, const Point& b) { return norm(combine(a, 1.0, b, -1.0)); }

nlohmann::json points_json(const std::vector<Point>& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : v) arr.push_back(p);
  return arr;
}

/// True when some two consecutive gaps are within tolerance. The gap between rungs t and
/// t/2 is held to ladder_tolerance(t). `rung` gets the rung with the smallest gap inside a
/// passing window.
bool cauchy(const std::vector<double>& steps, const std::vector<double>& gaps, std::size_t& rung) {
  bool found = false;
  double best = INFINITY;
  for (std::size_t j = 0; j + 1 < gaps.size(); ++j) {
    if (gaps[j] <= ladder_tolerance(steps[j]) && gaps[j + 1] <= ladder_tolerance(steps[j + 1])) {
      found = true;
      if (gaps[j] < best) {
        best = gaps[j];
        rung = j + 1;
      }
      if (gaps[j + 1] < best) {
        best = gaps[j + 1];
        rung = j + 2;
      }
    }
  }
  return found;
}

}  // namespace

std::vector<double> standard_ladder() {
  std::vector<double> out;
  for (int k = 6; k <= 20; ++k) out.push_back(std::ldexp(1.0, -k));
  return out;
}

std::vector<double> local_ladder(const std::vector<double>& ladder, double scale, std::size_t min_rungs) {
  std::vector<double> out;
  for (std::size_t j = 0; j < ladder.size(); ++j) {
    if (ladder[j] <= scale || j + min_rungs >= ladder.size()) out.push_back(ladder[j]);
  }
  return out;
}

double ladder_tolerance(double t) { return std::max(1e-5, 10.0 * t); }

std::string to_string(DiffVerdict v) {
  switch (v) {
    case DiffVerdict::exists:
      return "exists";
    case DiffVerdict::not_differentiable:
      return "not differentiable";
    case DiffVerdict::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

double DiffReport::one_sided_bottom() const {
  double m = 0.0;
  if (!forward.empty()) m = std::max(m, norm(forward.back()));
  if (!backward.empty()) m = std::max(m, norm(backward.back()));
  return m;
}

nlohmann::json DiffReport::to_json() const {
  nlohmann::json j = {{"order", order},
                      {"x", x},
                      {"steps", steps},
                      {"quotients", points_json(quotient)},
                      {"gaps", gaps},
                      {"verdict", to_string(verdict)},
                      {"estimate", estimate},
                      {"estimate_rung", estimate_rung}};
  if (!forward.empty()) j["forward"] = points_json(forward);
  if (!backward.empty()) j["backward"] = points_json(backward);
  if (lipschitz_checked) {
    j["pointwise_lipschitz"] = lipschitz;
    j["second_derivative_zero"] = second_derivative_zero;
    j["locality"] = "finite ladder";
  }
  return j;
}

DiffReport fd_first_derivative(const PathFn& g, Interval domain, double x, const std::vector<double>& ladder) {
  DiffReport r;
  r.order = 1;
  r.x = x;
  r.steps = ladder;
  const Point gx = g(x);
  const bool fwd = x + ladder.front() <= domain.hi;
  const bool bwd = x - ladder.front() >= domain.lo;
  for (double t : ladder) {
    if (fwd) r.forward.push_back(combine(g(x + t), 1.0 / t, gx, -1.0 / t));
    if (bwd) r.backward.push_back(combine(gx, 1.0 / t, g(x - t), -1.0 / t));
    if (fwd && bwd) {
      r.quotient.push_back(combine(r.forward.back(), 0.5, r.backward.back(), 0.5));
    } else {
      r.quotient.push_back(fwd ? r.forward.back() : r.backward.back());
    }
  }
  for (std::size_t j = 0; j + 1 < r.quotient.size(); ++j) r.gaps.push_back(dist(r.quotient[j + 1], r.quotient[j]));
  std::size_t rung = 0;
  const bool converges = cauchy(r.steps, r.gaps, rung);

  bool agree = true;
  bool split = false;
  if (fwd && bwd) {
    std::vector<double> D;
    for (std::size_t j = 0; j < ladder.size(); ++j) D.push_back(dist(r.forward[j], r.backward[j]));
    agree = false;
    for (std::size_t j = 0; j + 2 < D.size(); ++j) {
      const bool small = D[j] <= ladder_tolerance(ladder[j]) && D[j + 1] <= ladder_tolerance(ladder[j + 1]) &&
                         D[j + 2] <= ladder_tolerance(ladder[j + 2]);
      const bool decaying = D[j + 1] <= 0.6 * D[j] && D[j + 2] <= 0.6 * D[j + 1];
      if (small || decaying) agree = true;
    }
    split = !agree && std::all_of(D.begin(), D.end(), [&](double d) { return d > ladder_tolerance(ladder.back()); });
  }
  if (converges && agree) {
    r.verdict = DiffVerdict::exists;
    r.estimate_rung = rung;
    r.estimate = r.quotient[rung];
  } else {
    r.verdict = split ? DiffVerdict::not_differentiable : DiffVerdict::inconclusive;
    r.estimate_rung = ladder.size() - 1;
    r.estimate = r.quotient.back();
  }
  return r;
}

namespace {

/// Central quotient at y with step h, one-sided near the ends of the domain.
Point local_slope(const PathFn& g, Interval domain, double y, double h) {
  if (y - h >= domain.lo && y + h <= domain.hi) return combine(g(y + h), 0.5 / h, g(y - h), -0.5 / h);
  if (y + h <= domain.hi) return combine(g(y + h), 1.0 / h, g(y), -1.0 / h);
  return combine(g(y), 1.0 / h, g(y - h), -1.0 / h);
}

}  // namespace

DiffReport fd_second_derivative(const PathFn& g, Interval domain, double x, const std::vector<double>& ladder,
                                bool flat_point) {
  DiffReport r;
  r.order = 2;
  r.x = x;
  r.steps = ladder;
  const Point gx = g(x);
  // Stencil chosen per rung: central once x +- t fits in the domain.
  for (double t : ladder) {
    const double inv = 1.0 / (t * t);
    if (x - t >= domain.lo && x + t <= domain.hi) {
      const Point s = combine(g(x + t), 1.0, g(x - t), 1.0);
      r.quotient.push_back(combine(s, inv, gx, -2.0 * inv));
    } else {
      const double sgn = x + 2.0 * t <= domain.hi ? 1.0 : -1.0;
      const Point s = combine(g(x + 2.0 * sgn * t), 1.0, gx, 1.0);
      r.quotient.push_back(combine(s, inv, g(x + sgn * t), -2.0 * inv));
    }
  }
  for (std::size_t j = 0; j + 1 < r.quotient.size(); ++j) r.gaps.push_back(dist(r.quotient[j + 1], r.quotient[j]));
  std::size_t rung = 0;
  const bool converges = cauchy(r.steps, r.gaps, rung);
  r.verdict = converges ? DiffVerdict::exists : DiffVerdict::inconclusive;
  r.estimate_rung = converges ? rung : ladder.size() - 1;
  r.estimate = r.quotient[r.estimate_rung];

  if (flat_point) {
    r.lipschitz_checked = true;
    const DiffReport first = fd_first_derivative(g, domain, x, ladder);
    const Point d0 = first.estimate;
    for (double t : ladder) {
      double worst = 0.0;
      for (double sgn : {1.0, -1.0}) {
        const double y = x + sgn * t;
        if (y < domain.lo || y > domain.hi) continue;
        worst = std::max(worst, dist(local_slope(g, domain, y, 0.25 * t), d0) / t);
      }
      r.lipschitz.push_back(worst);
    }
    bool bounded = first.verdict == DiffVerdict::exists;
    for (std::size_t j = 0; j + 1 < r.lipschitz.size(); ++j) {
      if (r.lipschitz[j + 1] > 4.0 * r.lipschitz[j] && r.lipschitz[j + 1] > 1e-300) bounded = false;
    }
    r.second_derivative_zero = bounded && r.lipschitz.back() <= 1e-3;
    if (r.second_derivative_zero) {
      r.verdict = DiffVerdict::exists;
      r.estimate = Point(gx.size(), 0.0);
    }
  }
  return r;
}

QuadraticBound quadratic_ratio(const PathFn& g, Interval domain, double x, const std::vector<double>& ladder,
                               double factor) {
  QuadraticBound q;
  const Point gx = g(x);
  for (double t : ladder) {
    double worst = 0.0;
    for (double sgn : {1.0, -1.0}) {
      const double y = x + sgn * t;
      if (y < domain.lo || y > domain.hi) continue;
      worst = std::max(worst, dist(g(y), gx) / (t * t));
    }
    q.ratios.push_back(worst);
    q.max_ratio = std::max(q.max_ratio, worst);
  }
  for (std::size_t j = 0; j + 1 < q.ratios.size(); ++j) {
    if (q.ratios[j + 1] > factor * q.ratios[j] && q.ratios[j + 1] > 1e-300) q.bounded = false;
  }
  return q;
}

std::vector<double> off_corner_points(Interval domain, const std::vector<double>& corners, std::size_t count,
                                      std::uint64_t seed, double guard) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(domain.lo, domain.hi);
  const double gap = guard * domain.length();
  std::vector<double> out;
  while (out.size() < count) {
    const double s = std::ldexp(std::round(std::ldexp(unit(rng), 30)), -30);
    if (s < domain.lo || s > domain.hi) continue;
    const bool near = std::any_of(corners.begin(), corners.end(), [&](double c) { return std::abs(c - s) < gap; });
    if (!near) out.push_back(s);
  }
  return out;
}

nlohmann::json VartimesReport::to_json() const {
  return {{"x", x}, {"C_x", C}, {"samples", samples}, {"failures", failures}, {"max_ratio", max_ratio}, {"pass", pass}};
}

double polyline_displacement(const Path& g0, double y, double z) {
  const std::size_t jy = g0.segment_index(y);
  const std::size_t jz = g0.segment_index(z);
  if (jy == jz) {
    const double dt = g0.breakpoint(jy + 1) - g0.breakpoint(jy);
    return std::abs(z - y) * (g0.segment_length(jy) / dt);
  }
  return dist(g0.evaluate(y), g0.evaluate(z));
}

VartimesReport check_vartimes(const Path& g0, const DiffFn& right_diff, const DiffFn& left_diff, double x, double C,
                              std::size_t samples, std::uint64_t seed) {
  VartimesReport rep;
  rep.x = x;
  rep.C = C;
  rep.samples = samples;
  const double lo = g0.a(), hi = g0.b();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t s = 0; s < samples; ++s) {
    bool right = unit(rng) < 0.5;
    if (x <= lo) right = true;
    if (x >= hi) right = false;
    const double span = right ? hi - x : x - lo;
    const double d1 = span * std::pow(10.0, -8.0 * unit(rng));
    const double d2 = span * std::pow(10.0, -8.0 * unit(rng));
    const double y = right ? std::min(hi, x + d1) : std::max(lo, x - d1);
    const double z = right ? std::min(hi, x + d2) : std::max(lo, x - d2);
    const DiffFn& m = right ? right_diff : left_diff;
    const double lhs = polyline_displacement(g0, y, z);
    const double rhs = std::abs(m(y, z)) * (std::abs(m(x, z)) + std::abs(m(x, y)));
    double ratio = 0.0;
    if (rhs > 0.0) {
      ratio = lhs / (C * rhs);
    } else if (lhs > 0.0) {
      ratio = INFINITY;
    }
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    if (lhs > C * rhs * (1.0 + kVartimesSlack)) ++rep.failures;
  }
  rep.pass = rep.failures == 0;
  return rep;
}

VartimesReport check_vartimes_w(const Path& g0, const WeightedSqrtMap& w, double x, double C, std::size_t samples,
                                std::uint64_t seed) {
  const DiffFn d = [&w](double y, double z) { return w.difference(y, z); };
  return check_vartimes(g0, d, d, x, C, samples, seed);
}

VartimesReport check_intm(const Path& g0, const FracAccumulator& left, const FracAccumulator& right, double x,
                          std::size_t samples, std::uint64_t seed) {
  const DiffFn dl = [&left](double y, double z) { return left.difference(y, z); };
  const DiffFn dr = [&right](double y, double z) { return right.difference(y, z); };
  return check_vartimes(g0, dl, dr, x, 1.0, samples, seed);
}

double image_measure_estimate(const std::function<double(double)>& map, const ClosedSet& set, int depth,
                              Interval ambient, Interval range) {
  if (set.is_finite()) return 0.0;
  const auto gaps = set.contiguous_intervals(depth, ambient).intervals;
  long double covered = 0.0L, comp = 0.0L;
  for (const auto& c : gaps) {
    const long double term = static_cast<long double>(map(c.hi)) - static_cast<long double>(map(c.lo));
    const long double t = covered + term;
    comp += std::abs(covered) >= std::abs(term) ? (covered - t) + term : (term - t) + covered;
    covered = t;
  }
  return static_cast<double>(static_cast<long double>(range.length()) - (covered + comp));
}

Rational cantor_identity_measure_exact(int depth) {
  const auto nums = ClosedSet::cantor_block_numerators(depth);
  const std::int64_t den = pow3(depth);
  std::int64_t gap_units = 0;
  for (std::size_t i = 0; i + 1 < nums.size(); ++i) gap_units += nums[i + 1] - nums[i] - 1;
  return Rational(1) - Rational(gap_units, den);
}

}  // namespace halfvar
