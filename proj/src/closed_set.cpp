#include "halfvar/closed_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace halfvar {

namespace {

constexpr int kMaxCantorDepth = 22;

int resolve_depth(std::optional<int> depth, int fallback) { return std::max(0, depth.value_or(fallback)); }

// Ternary iteration of t = n/den under x -> 3x (x <= 1/3) or 3x - 2 (x >= 2/3).
// The orbit lives on {0..den}, so it is eventually periodic; Brent's method stops it.
bool ternary_member(__int128 n, __int128 den) {
  if (n < 0 || n > den) return false;
  auto step = [den](__int128 x, bool& out) -> __int128 {
    const __int128 y = 3 * x;
    if (y <= den) return y;
    if (y >= 2 * den) return y - 2 * den;
    out = true;
    return 0;
  };
  bool out = false;
  __int128 tortoise = n;
  __int128 hare = step(n, out);
  std::size_t power = 1, lam = 1;
  constexpr std::size_t kCap = std::size_t{1} << 22;
  std::size_t steps = 0;
  while (!out && tortoise != hare) {
    if (power == lam) {
      tortoise = hare;
      power *= 2;
      lam = 0;
    }
    hare = step(hare, out);
    ++lam;
    if (++steps > kCap) return true;  // not excluded within kCap ternary digits
  }
  return !out;
}

}  // namespace

double SequenceRule::term(int n) const {
  if (name == "dyadic") return offset + scale * std::ldexp(1.0, -n);
  if (name == "harmonic") return offset + scale / (static_cast<double>(n) + 1.0);
  throw std::invalid_argument("unknown sequence rule: " + name);
}

ClosedSet ClosedSet::finite(std::vector<double> points) {
  ClosedSet s;
  s.kind_ = Kind::finite;
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  s.points_ = std::move(points);
  return s;
}

ClosedSet ClosedSet::sequence(SequenceRule rule, int default_depth) {
  if (rule.name != "dyadic" && rule.name != "harmonic")
    throw std::invalid_argument("unknown sequence rule: " + rule.name);
  if (rule.scale == 0.0) throw std::invalid_argument("sequence scale must be nonzero");
  ClosedSet s;
  s.kind_ = Kind::sequence;
  s.rule_ = std::move(rule);
  s.depth_ = default_depth;
  return s;
}

ClosedSet ClosedSet::cantor(Interval interval, int default_depth) {
  if (!(interval.lo < interval.hi)) throw std::invalid_argument("cantor_set: degenerate interval");
  ClosedSet s;
  s.kind_ = Kind::cantor;
  s.cantor_ = interval;
  s.depth_ = default_depth;
  return s;
}

ClosedSet cantor_set(Interval interval, int default_depth) { return ClosedSet::cantor(interval, default_depth); }

ClosedSet ClosedSet::set_union(std::vector<ClosedSet> parts) {
  if (parts.empty()) throw std::invalid_argument("union of no sets");
  ClosedSet s;
  s.kind_ = Kind::set_union;
  for (const auto& p : parts) s.depth_ = std::max(s.depth_, p.depth_);
  s.parts_ = std::move(parts);
  return s;
}

ClosedSet ClosedSet::with_depth(int depth) const {
  ClosedSet s = *this;
  s.depth_ = depth;
  for (auto& p : s.parts_) p = p.with_depth(depth);
  return s;
}

std::vector<std::int64_t> ClosedSet::cantor_block_numerators(int n) {
  if (n < 0 || n > kMaxCantorDepth) throw std::invalid_argument("cantor depth out of range");
  std::vector<std::int64_t> cur{0};
  for (int level = 0; level < n; ++level) {
    std::vector<std::int64_t> next;
    next.reserve(cur.size() * 2);
    for (auto left : cur) {
      next.push_back(3 * left);
      next.push_back(3 * left + 2);
    }
    cur = std::move(next);
  }
  return cur;
}

Interval ClosedSet::cantor_block(int n, int i) const {
  if (kind_ != Kind::cantor) throw std::logic_error("cantor_block on non-Cantor set");
  const auto nums = cantor_block_numerators(n);
  if (i < 1 || i > static_cast<int>(nums.size())) throw std::out_of_range("cantor block index");
  const double den = static_cast<double>(pow3(n));
  const double w = cantor_.hi - cantor_.lo;
  const auto left = nums[static_cast<std::size_t>(i - 1)];
  return {cantor_.lo + w * (static_cast<double>(left) / den), cantor_.lo + w * (static_cast<double>(left + 1) / den)};
}

void ClosedSet::raw_cover(int depth, std::vector<Interval>& out) const {
  switch (kind_) {
    case Kind::finite:
      for (double p : points_) out.push_back({p, p});
      break;
    case Kind::sequence: {
      const int terms = std::max(1, depth);
      double last = rule_.offset;
      for (int k = 0; k < terms; ++k) {
        last = rule_.term(rule_.start + k);
        out.push_back({last, last});
      }
      out.push_back({std::min(rule_.offset, last), std::max(rule_.offset, last)});
      break;
    }
    case Kind::cantor: {
      const int d = std::min(depth, kMaxCantorDepth);
      const double den = static_cast<double>(pow3(d));
      const double w = cantor_.hi - cantor_.lo;
      for (auto left : cantor_block_numerators(d)) {
        const double lo = cantor_.lo + w * (static_cast<double>(left) / den);
        const double hi = cantor_.lo + w * (static_cast<double>(left + 1) / den);
        out.push_back({lo, hi});
      }
      break;
    }
    case Kind::set_union:
      for (const auto& p : parts_) p.raw_cover(depth, out);
      break;
  }
}

std::vector<Interval> merge_blocks(std::vector<Interval> blocks) {
  std::sort(blocks.begin(), blocks.end(), [](const Interval& x, const Interval& y) {
    return x.lo < y.lo || (x.lo == y.lo && x.hi < y.hi);
  });
  std::vector<Interval> merged;
  for (const auto& b : blocks) {
    if (!merged.empty() && b.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, b.hi);
    } else {
      merged.push_back(b);
    }
  }
  return merged;
}

int ClosedSet::effective_depth(int depth) const {
  depth = std::max(0, depth);
  switch (kind_) {
    case Kind::finite:
      return 0;
    case Kind::cantor:
      return std::min(depth, kMaxCantorDepth);
    case Kind::sequence:
      return depth;
    case Kind::set_union: {
      int e = 0;
      for (const auto& p : parts_) e = std::max(e, p.effective_depth(depth));
      return e;
    }
  }
  return depth;
}

std::vector<Interval> ClosedSet::cover(std::optional<int> depth) const {
  std::vector<Interval> raw;
  raw_cover(resolve_depth(depth, depth_), raw);
  return merge_blocks(std::move(raw));
}

std::vector<double> ClosedSet::points(std::optional<int> depth) const {
  std::vector<Interval> raw;
  raw_cover(resolve_depth(depth, depth_), raw);
  std::vector<double> pts;
  pts.reserve(raw.size() * 2);
  for (const auto& b : raw) {
    pts.push_back(b.lo);
    pts.push_back(b.hi);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

double ClosedSet::cover_length(std::optional<int> depth) const {
  double total = 0.0;
  for (const auto& b : cover(depth)) total += b.length();
  return total;
}

ContiguousResult ClosedSet::contiguous_intervals(std::optional<int> depth, std::optional<Interval> ambient) const {
  ContiguousResult res;
  auto blocks = cover(depth);
  const Interval amb = ambient.value_or(Interval{min(), max()});
  if (!contains(amb.lo)) {
    res.adjoined_lo = true;
    blocks.push_back({amb.lo, amb.lo});
  }
  if (!contains(amb.hi)) {
    res.adjoined_hi = true;
    blocks.push_back({amb.hi, amb.hi});
  }
  blocks = merge_blocks(std::move(blocks));
  for (std::size_t k = 0; k + 1 < blocks.size(); ++k) {
    const double lo = std::max(blocks[k].hi, amb.lo);
    const double hi = std::min(blocks[k + 1].lo, amb.hi);
    if (lo < hi) res.intervals.push_back({lo, hi});
  }
  return res;
}

bool ClosedSet::cantor_contains_unit(Rational t) {
  return ternary_member(static_cast<__int128>(t.num), static_cast<__int128>(t.den));
}

bool ClosedSet::contains(double x) const {
  switch (kind_) {
    case Kind::finite:
      return std::binary_search(points_.begin(), points_.end(), x);
    case Kind::sequence: {
      if (x == rule_.offset) return true;
      const double r = (x - rule_.offset) / rule_.scale;
      if (!(r > 0.0)) return false;
      double guess = rule_.name == "dyadic" ? -std::log2(r) : 1.0 / r - 1.0;
      if (!std::isfinite(guess)) return false;
      const long n0 = std::lround(guess);
      for (long n = n0 - 2; n <= n0 + 2; ++n) {
        if (n < rule_.start || n > std::numeric_limits<int>::max()) continue;
        if (rule_.term(static_cast<int>(n)) == x) return true;
      }
      return false;
    }
    case Kind::cantor: {
      if (x < cantor_.lo || x > cantor_.hi) return false;
      const double w = cantor_.hi - cantor_.lo;
      const long double t = (static_cast<long double>(x) - cantor_.lo) / w;
      if (t == 0.0L || t == 1.0L) return true;
      // Membership up to 4 ulp: enumerated endpoints such as 3^{-k} are rounded doubles.
      const double scale = std::max({std::abs(x), std::abs(cantor_.lo), std::abs(cantor_.hi)});
      long double tol = 4.0L * std::numeric_limits<double>::epsilon() * scale / w;
      long double y = t;
      while (tol < 1.0L / 18) {
        if (y > 1.0L / 3 + tol && y < 2.0L / 3 - tol) return false;
        y = y <= 0.5L ? 3 * y : 3 * y - 2;
        tol *= 3;
      }
      return true;
    }
    case Kind::set_union:
      return std::any_of(parts_.begin(), parts_.end(), [x](const ClosedSet& p) { return p.contains(x); });
  }
  return false;
}

double ClosedSet::min() const {
  switch (kind_) {
    case Kind::finite:
      if (points_.empty()) throw std::logic_error("empty finite set");
      return points_.front();
    case Kind::sequence:
      return std::min(rule_.offset, rule_.term(rule_.start));
    case Kind::cantor:
      return cantor_.lo;
    case Kind::set_union: {
      double m = std::numeric_limits<double>::infinity();
      for (const auto& p : parts_) m = std::min(m, p.min());
      return m;
    }
  }
  return 0.0;
}

double ClosedSet::max() const {
  switch (kind_) {
    case Kind::finite:
      if (points_.empty()) throw std::logic_error("empty finite set");
      return points_.back();
    case Kind::sequence:
      return std::max(rule_.offset, rule_.term(rule_.start));
    case Kind::cantor:
      return cantor_.hi;
    case Kind::set_union: {
      double m = -std::numeric_limits<double>::infinity();
      for (const auto& p : parts_) m = std::max(m, p.max());
      return m;
    }
  }
  return 0.0;
}

bool ClosedSet::is_finite() const {
  switch (kind_) {
    case Kind::finite:
      return true;
    case Kind::sequence:
    case Kind::cantor:
      return false;
    case Kind::set_union:
      return std::all_of(parts_.begin(), parts_.end(), [](const ClosedSet& p) { return p.is_finite(); });
  }
  return false;
}

nlohmann::json ClosedSet::to_json() const {
  nlohmann::json j;
  switch (kind_) {
    case Kind::finite:
      j["set"] = "finite";
      j["points"] = points_;
      return j;
    case Kind::sequence:
      j["set"] = "sequence";
      j["rule"] = rule_.name;
      j["params"] = {{"start", rule_.start}, {"scale", rule_.scale}, {"offset", rule_.offset}};
      j["limits"] = {rule_.offset};
      break;
    case Kind::cantor:
      j["set"] = "cantor";
      j["interval"] = {cantor_.lo, cantor_.hi};
      break;
    case Kind::set_union: {
      j["set"] = "union";
      auto parts = nlohmann::json::array();
      for (const auto& p : parts_) parts.push_back(p.to_json());
      j["parts"] = parts;
      break;
    }
  }
  j["depth"] = depth_;
  return j;
}

ClosedSet ClosedSet::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("set").get<std::string>();
  const int depth = j.value("depth", -1);
  if (kind == "finite") return finite(j.at("points").get<std::vector<double>>());
  if (kind == "cantor") {
    const auto iv = j.at("interval").get<std::vector<double>>();
    if (iv.size() != 2) throw std::invalid_argument("cantor interval must have two entries");
    return cantor({iv[0], iv[1]}, depth < 0 ? 8 : depth);
  }
  if (kind == "sequence") {
    SequenceRule rule;
    rule.name = j.at("rule").get<std::string>();
    const auto params = j.value("params", nlohmann::json::object());
    rule.start = params.value("start", 1);
    rule.scale = params.value("scale", 1.0);
    rule.offset = params.value("offset", 0.0);
    if (j.contains("limits")) {
      const auto lim = j.at("limits").get<std::vector<double>>();
      if (lim.size() != 1 || lim[0] != rule.offset)
        throw std::invalid_argument("sequence limits must equal the rule's limit point");
    }
    return sequence(rule, depth < 0 ? 16 : depth);
  }
  if (kind == "union") {
    std::vector<ClosedSet> parts;
    for (const auto& p : j.at("parts")) parts.push_back(from_json(p));
    auto u = set_union(std::move(parts));
    return depth < 0 ? u : u.with_depth(depth);
  }
  throw std::invalid_argument("unknown set kind: " + kind);
}

}  // namespace halfvar
