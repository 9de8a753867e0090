#ifndef HALFVAR_CLOSED_SET_HPP
#define HALFVAR_CLOSED_SET_HPP

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "halfvar/rational.hpp"
#include "json.hpp"

namespace halfvar {

/// Closed real interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Open interval (lo, hi); used for contiguous intervals and constancy intervals.
struct OpenInterval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  friend bool operator==(const OpenInterval&, const OpenInterval&) = default;
};

struct ContiguousResult {
  std::vector<OpenInterval> intervals;  // sorted by left endpoint
  bool adjoined_lo = false;             // ambient endpoint was not a member and was added
  bool adjoined_hi = false;
};

/// Sequence rules for countable convergent sets:
///   dyadic:   a_n = offset + scale * 2^{-n},     n >= start
///   harmonic: a_n = offset + scale / (n + 1),    n >= start
/// The limit point `offset` belongs to the set.
struct SequenceRule {
  std::string name = "dyadic";
  int start = 1;
  double scale = 1.0;
  double offset = 0.0;

  double term(int n) const;
};

/// A closed subset of the line. Kinds: finite point set, convergent sequence with its
/// limit, middle-thirds Cantor set on [a,b], finite union of those.
///
/// Every kind exposes a depth-D *cover*: finitely many closed blocks whose endpoints are
/// members of the set and whose union contains the set. Gaps between merged blocks are
/// genuine contiguous intervals, so enumeration only ever grows with depth.
class ClosedSet {
 public:
  enum class Kind { finite, sequence, cantor, set_union };

  static ClosedSet finite(std::vector<double> points);
  static ClosedSet sequence(SequenceRule rule, int default_depth = 16);
  static ClosedSet cantor(Interval interval, int default_depth = 8);
  static ClosedSet set_union(std::vector<ClosedSet> parts);

  Kind kind() const { return kind_; }
  int default_depth() const { return depth_; }
  ClosedSet with_depth(int depth) const;

  /// Closed blocks covering the set at `depth`, sorted and merged.
  std::vector<Interval> cover(std::optional<int> depth = {}) const;
  /// All block endpoints of the cover (members of the set), sorted, unique.
  std::vector<double> points(std::optional<int> depth = {}) const;
  /// Total cover length: an upper estimate of the Lebesgue measure.
  double cover_length(std::optional<int> depth = {}) const;

  /// Maximal open components of [ambient] minus the set that are certain at `depth`.
  /// Ambient defaults to [min, max] of the set.
  ContiguousResult contiguous_intervals(std::optional<int> depth = {},
                                        std::optional<Interval> ambient = {}) const;

  bool contains(double x) const;
  /// Depth actually used by cover(depth): Cantor covers are capped, sequences are not.
  int effective_depth(int depth) const;
  /// Exact membership for Cantor sets in unit coordinates: t = (x - a) / (b - a).
  static bool cantor_contains_unit(Rational t);

  double min() const;
  double max() const;
  bool is_finite() const;

  // Cantor specifics. Level n+1 blocks K^n_i, i = 1..2^n (left to right), length 3^{-n}.
  Interval cantor_interval() const { return cantor_; }
  /// Left endpoints of the 2^n blocks at level n+1, in units of 3^{-n}.
  static std::vector<std::int64_t> cantor_block_numerators(int n);
  Interval cantor_block(int n, int i) const;

  const std::vector<double>& finite_points() const { return points_; }
  const SequenceRule& rule() const { return rule_; }
  const std::vector<ClosedSet>& parts() const { return parts_; }

  nlohmann::json to_json() const;
  static ClosedSet from_json(const nlohmann::json& j);

 private:
  Kind kind_ = Kind::finite;
  int depth_ = 0;
  std::vector<double> points_;
  SequenceRule rule_;
  Interval cantor_;
  std::vector<ClosedSet> parts_;

  void raw_cover(int depth, std::vector<Interval>& out) const;
};

/// Middle-thirds Cantor set scaled to `interval`.
ClosedSet cantor_set(Interval interval, int default_depth = 8);

std::vector<Interval> merge_blocks(std::vector<Interval> blocks);

}  // namespace halfvar

#endif
