#include "halfvar/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "halfvar/variation.hpp"

namespace halfvar {

std::vector<double> evaluate_grid(const std::function<double(double)>& f, std::span<const double> xs, Exec exec) {
  std::vector<double> out(xs.size());
  const auto n = static_cast<std::ptrdiff_t>(xs.size());
  if (exec == Exec::serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = f(xs[i]);
  } else {
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = f(xs[i]);
  }
  return out;
}

std::vector<double> uniform_grid(Interval dom, std::size_t n) {
  std::vector<double> xs(n + 1);
  for (std::size_t i = 0; i <= n; ++i) xs[i] = dom.lo + dom.length() * (static_cast<double>(i) / static_cast<double>(n));
  xs.back() = dom.hi;
  return xs;
}

namespace {

double oracle_instance(std::uint64_t seed, std::size_t max_points) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t nb = 2 + rng() % 7;
  std::vector<double> t{0.0, 1.0};
  while (t.size() < nb) t.push_back(unit(rng));
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  std::vector<Point> vals;
  for (std::size_t i = 0; i < t.size(); ++i) vals.push_back({2.0 * unit(rng) - 1.0});
  const Path g(t, vals);
  const std::size_t nk = 1 + rng() % max_points;
  std::vector<double> K;
  for (std::size_t i = 0; i < nk; ++i) K.push_back(unit(rng));
  const double alpha = 0.05 + 0.9 * unit(rng);
  const ScalarFn f = scalar_view(g);
  const double fast = fractional_variation(f, alpha, ClosedSet::finite(K), 0).value;
  const double brute = fractional_variation_bruteforce(f, alpha, K);
  return std::abs(fast - brute);
}

}  // namespace

OracleSweep oracle_sweep(std::uint64_t seed, std::size_t count, std::size_t max_points, double tolerance, Exec exec) {
  std::vector<double> diffs(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
  if (exec == Exec::serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) diffs[i] = oracle_instance(seed + static_cast<std::uint64_t>(i), max_points);
  } else {
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < n; ++i) diffs[i] = oracle_instance(seed + static_cast<std::uint64_t>(i), max_points);
  }
  OracleSweep out;
  out.instances = count;
  for (double d : diffs) {
    out.max_abs_diff = std::max(out.max_abs_diff, d);
    if (!(d <= tolerance)) ++out.mismatches;
  }
  return out;
}

std::vector<VartimesReport> vartimes_all(const Reparametrization& r, std::size_t samples, std::uint64_t seed,
                                         double c_scale, Exec exec) {
  const auto& corners = r.corners();
  std::vector<VartimesReport> out(corners.size());
  const auto n = static_cast<std::ptrdiff_t>(corners.size());
  auto one = [&](std::ptrdiff_t i) {
    const auto& c = corners[static_cast<std::size_t>(i)];
    return check_vartimes_w(r.g0(), r.w(), c.arc, c.C * c_scale, samples, seed + static_cast<std::uint64_t>(i));
  };
  if (exec == Exec::serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = one(i);
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = one(i);
  }
  return out;
}

double small_speed_fraction(const Reparametrization& r, const std::vector<double>& grid, double delta, Exec exec) {
  const auto speeds = evaluate_grid([&r](double s) { return r.flat_speed(s); }, grid, exec);
  const auto below = std::count_if(speeds.begin(), speeds.end(), [delta](double v) { return v < delta; });
  return static_cast<double>(below) / static_cast<double>(grid.size());
}

PipelineChecks check_pipeline(const Reparametrization& r, std::size_t off_points, std::uint64_t seed) {
  const PathFn g = [&r](double s) { return r.g(s); };
  const auto ladder = standard_ladder();
  PipelineChecks out;
  const auto& cs = r.corners();
  std::vector<double> corner_s;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const auto& c = cs[i];
    corner_s.push_back(c.s);
    double scale = INFINITY;
    if (i > 0) scale = std::min(scale, c.s - cs[i - 1].s);
    if (i + 1 < cs.size()) scale = std::min(scale, cs[i + 1].s - c.s);
    const auto d1 = fd_first_derivative(g, r.domain(), c.s, ladder);
    const auto q = quadratic_ratio(g, r.domain(), c.s, local_ladder(ladder, scale));
    double norm = 0.0;
    for (double e : d1.estimate) norm = std::max(norm, std::abs(e));
    const bool flat = d1.verdict == DiffVerdict::exists && norm <= 1e-5;
    ++out.corners;
    out.flat += flat;
    out.quadratic_bounded += q.bounded;
    out.corner_reports.push_back({{"s", c.s}, {"t", c.t}, {"first_derivative", d1.to_json()}, {"flat", flat},
                                  {"quadratic_max", q.max_ratio}, {"quadratic_bounded", q.bounded}});
  }
  for (double s : off_corner_points(r.domain(), corner_s, off_points, seed)) {
    const auto d2 = fd_second_derivative(g, r.domain(), s, ladder);
    ++out.off_points;
    out.off_exists += d2.verdict == DiffVerdict::exists;
    out.off_reports.push_back({{"s", s}, {"verdict", to_string(d2.verdict)}});
  }
  return out;
}

}  // namespace halfvar
