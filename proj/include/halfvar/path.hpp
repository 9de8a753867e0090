#ifndef HALFVAR_PATH_HPP
#define HALFVAR_PATH_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "halfvar/closed_set.hpp"
#include "json.hpp"

namespace halfvar {

using Point = std::vector<double>;

/// Provenance of a generator-backed path: the generator name, its parameters and the
/// truncation depth it was materialized at.
struct GeneratorInfo {
  std::string name;
  nlohmann::json params = nlohmann::json::object();
  int depth = 0;
  /// Analytic bound on V(f) - V(truncation), when the generator supplies one.
  std::optional<double> variation_tail;
  /// Closed sets of accumulation points of corners (limits lost by truncation).
  std::vector<ClosedSet> accumulation;
};

/// Continuous piecewise-affine path [a,b] -> R^d. Immutable after construction.
class Path {
 public:
  Path(std::vector<double> breakpoints, std::vector<Point> values);
  Path(std::vector<double> breakpoints, std::vector<double> flat_values, std::size_t dimension);

  double a() const { return t_.front(); }
  double b() const { return t_.back(); }
  Interval domain() const { return {a(), b()}; }
  std::size_t dimension() const { return dim_; }
  std::size_t size() const { return t_.size(); }
  std::size_t segments() const { return t_.size() - 1; }

  const std::vector<double>& breakpoints() const { return t_; }
  double breakpoint(std::size_t i) const { return t_[i]; }
  std::span<const double> value(std::size_t i) const { return {x_.data() + i * dim_, dim_}; }
  const std::vector<double>& flat_values() const { return x_; }

  /// Affine interpolation; exact at breakpoints. Throws std::domain_error outside [a,b].
  Point evaluate(double t) const;
  void evaluate_into(double t, std::span<double> out) const;
  /// Index j of the segment [t_j, t_{j+1}] containing t (last segment for t = b).
  std::size_t segment_index(double t) const;

  /// Euclidean length of segment j.
  double segment_length(std::size_t j) const;
  bool segment_constant(std::size_t j) const;

  const std::optional<GeneratorInfo>& generator() const { return gen_; }
  Path with_generator(GeneratorInfo info) const;

  nlohmann::json to_json() const;

 private:
  std::vector<double> t_;
  std::vector<double> x_;
  std::size_t dim_ = 1;
  std::optional<GeneratorInfo> gen_;

  void validate() const;
};

/// Maximal open parameter interval on which the path is constant.
struct ConstancyInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool maximal = true;
  /// Breakpoint indices of the endpoints.
  std::size_t first = 0;
  std::size_t last = 0;
};

std::vector<ConstancyInterval> constancy_intervals(const Path& path);

/// Tent height on the i-th constancy interval (1-based, sorted by left endpoint).
double tent_height(const ConstancyInterval& c, std::size_t index);

/// Replaces every maximal constancy interval (c,d) by a tent: affine and non-constant on
/// (c, mid) and (mid, d), returning to the original value at d. Equal to the input
/// outside the constancy intervals. Scalar paths are displaced by +h; vector paths along
/// the unit direction of the segment entering c (first axis when c = a).
Path remove_constancy(const Path& path);

/// Parameter positions of the tent apexes inserted by remove_constancy.
std::vector<double> tent_apexes(const Path& path);

/// Builds a path from the explicit JSON form {"domain","dimension","breakpoints","values"}.
Path path_from_json(const nlohmann::json& j);

}  // namespace halfvar

#endif
