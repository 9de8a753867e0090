#include "halfvar/kf.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace halfvar {

std::string to_string(KfReason r) {
  switch (r) {
    case KfReason::endpoint:
      return "endpoint";
    case KfReason::corner:
      return "corner";
    case KfReason::constancy_boundary_with_turn:
      return "constancy-boundary-with-turn";
    case KfReason::accumulation:
      return "accumulation";
  }
  return "unknown";
}

bool same_direction(const Path& path, std::size_t i, std::size_t j, double tol) {
  auto p0 = path.value(i), p1 = path.value(i + 1);
  auto q0 = path.value(j), q1 = path.value(j + 1);
  const std::size_t d = path.dimension();
  if (d == 1) return ((p1[0] - p0[0]) > 0) == ((q1[0] - q0[0]) > 0);
  double dot = 0.0, nu = 0.0, nw = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double u = p1[k] - p0[k], w = q1[k] - q0[k];
    dot += u * w;
    nu += u * u;
    nw += w * w;
  }
  if (!(dot > 0.0)) return false;
  const double scale = std::sqrt(nu) * std::sqrt(nw);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t l = k + 1; l < d; ++l) {
      const double cross = (p1[k] - p0[k]) * (q1[l] - q0[l]) - (p1[l] - p0[l]) * (q1[k] - q0[k]);
      if (std::abs(cross) > tol * scale) return false;
    }
  }
  return true;
}

std::vector<double> KfSet::finite_points() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.t);
  return out;
}

nlohmann::json KfSet::to_json(int depth) const {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : points) pts.push_back({{"t", p.t}, {"reason", to_string(p.reason)}});
  nlohmann::json acc = nlohmann::json::array();
  for (const auto& a : accumulation) acc.push_back(a.to_json());
  return {{"set", set.to_json()}, {"points", pts}, {"accumulation", acc}, {"depth", depth}};
}

KfSet detect_K_f(const Path& path, KfOptions opts) {
  const std::size_t nseg = path.segments();
  // For each breakpoint i: nearest nonconstant segment on the left (< i) and right (>= i).
  std::vector<std::optional<std::size_t>> left(path.size()), right(path.size());
  std::optional<std::size_t> last;
  for (std::size_t i = 0; i < path.size(); ++i) {
    left[i] = last;
    if (i < nseg && !path.segment_constant(i)) last = i;
  }
  last.reset();
  for (std::size_t i = path.size(); i-- > 0;) {
    if (i < nseg && !path.segment_constant(i)) last = i;
    right[i] = i < nseg ? last : std::nullopt;
  }

  KfSet out;
  out.points.push_back({path.a(), KfReason::endpoint});
  for (std::size_t i = 1; i + 1 < path.size(); ++i) {
    const bool flat_before = path.segment_constant(i - 1);
    const bool flat_after = path.segment_constant(i);
    if (flat_before && flat_after) continue;
    if (!flat_before && !flat_after) {
      if (!same_direction(path, i - 1, i, opts.direction_tolerance)) out.points.push_back({path.breakpoint(i), KfReason::corner});
      continue;
    }
    const auto l = left[i];
    const auto r = right[i];
    if (!l || !r || !same_direction(path, *l, *r, opts.direction_tolerance)) {
      out.points.push_back({path.breakpoint(i), KfReason::constancy_boundary_with_turn});
    }
  }
  out.points.push_back({path.b(), KfReason::endpoint});

  std::vector<ClosedSet> parts{ClosedSet::finite(out.finite_points())};
  if (path.generator()) {
    for (const auto& acc : path.generator()->accumulation) {
      out.accumulation.push_back(acc);
      parts.push_back(acc);
      for (double p : acc.points(0)) {
        auto it = std::find_if(out.points.begin(), out.points.end(), [p](const KfPoint& q) { return q.t == p; });
        if (it == out.points.end()) out.points.push_back({p, KfReason::accumulation});
      }
    }
  }
  std::sort(out.points.begin(), out.points.end(), [](const KfPoint& x, const KfPoint& y) { return x.t < y.t; });
  out.set = parts.size() == 1 ? parts.front() : ClosedSet::set_union(std::move(parts));
  return out;
}

}  // namespace halfvar
