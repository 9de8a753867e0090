#ifndef HALFVAR_KERNELS_HPP
#define HALFVAR_KERNELS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "halfvar/reparam.hpp"
#include "halfvar/verify.hpp"

namespace halfvar {

/// Every kernel has a serial reference and an OpenMP version that must agree bit for bit.
enum class Exec { serial, parallel };

std::vector<double> evaluate_grid(const std::function<double(double)>& f, std::span<const double> xs, Exec exec);

/// Uniform grid of n + 1 points on [lo, hi].
std::vector<double> uniform_grid(Interval dom, std::size_t n);

struct OracleSweep {
  std::size_t instances = 0;
  std::size_t mismatches = 0;
  double max_abs_diff = 0.0;
};

/// Random (g, K, alpha) instances: g a scalar polyline on [0,1] with up to 8 breakpoints,
/// K of 1..max_points uniform points, alpha uniform in (0.05, 0.95). Instance i draws from
/// its own generator seeded with seed + i, so the result does not depend on scheduling.
OracleSweep oracle_sweep(std::uint64_t seed, std::size_t count, std::size_t max_points, double tolerance, Exec exec);

/// check_vartimes_w at every corner of the pipeline, with C scaled by `c_scale`.
std::vector<VartimesReport> vartimes_all(const Reparametrization& r, std::size_t samples, std::uint64_t seed,
                                         double c_scale, Exec exec);

/// Finite-difference checks of g at the corners and at seeded off-corner points. A corner
/// is flat when g'(s) exists with sup-norm <= 1e-5; its quadratic check uses the ladder
/// restricted to the distance to the nearest other corner.
struct PipelineChecks {
  std::size_t corners = 0;
  std::size_t flat = 0;
  std::size_t quadratic_bounded = 0;
  std::size_t off_points = 0;
  std::size_t off_exists = 0;
  nlohmann::json corner_reports = nlohmann::json::array();
  nlohmann::json off_reports = nlohmann::json::array();
  bool pass() const { return flat == corners && quadratic_bounded == corners && off_exists == off_points; }
};
PipelineChecks check_pipeline(const Reparametrization& r, std::size_t off_points, std::uint64_t seed);

/// Fraction of grid points where the flat speed |(f~ o v^{-1} o h)'| is below delta.
double small_speed_fraction(const Reparametrization& r, const std::vector<double>& grid, double delta, Exec exec);

}  // namespace halfvar

#endif
