#ifndef HALFVAR_KF_HPP
#define HALFVAR_KF_HPP

#include <string>
#include <vector>

#include "halfvar/closed_set.hpp"
#include "halfvar/path.hpp"

namespace halfvar {

enum class KfReason { endpoint, corner, constancy_boundary_with_turn, accumulation };

std::string to_string(KfReason r);

struct KfPoint {
  double t = 0.0;
  KfReason reason = KfReason::endpoint;
};

/// The bad set K_f: parameters near which the path is neither locally constant nor
/// locally a straight unit-speed run.
struct KfSet {
  ClosedSet set;                 // finite corners, joined with accumulation sets if any
  std::vector<KfPoint> points;   // finite part with reasons, sorted
  std::vector<ClosedSet> accumulation;

  std::vector<double> finite_points() const;
  nlohmann::json to_json(int depth) const;
};

struct KfOptions {
  /// Relative tolerance on the cross product of incoming and outgoing directions.
  double direction_tolerance = 1e-12;
};

/// Endpoints, direction-changing breakpoints (constancy runs skipped), constancy
/// boundaries whose far side stays constant to the end of the domain, and generator
/// accumulation sets.
KfSet detect_K_f(const Path& path, KfOptions opts = {});

/// True when segments i and j of `path` point in the same direction.
bool same_direction(const Path& path, std::size_t i, std::size_t j, double tol);

}  // namespace halfvar

#endif
