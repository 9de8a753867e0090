#include "halfvar/path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace halfvar {

Path::Path(std::vector<double> breakpoints, std::vector<Point> values) : t_(std::move(breakpoints)) {
  if (values.empty()) throw std::invalid_argument("Path: no values");
  dim_ = values.front().size();
  x_.reserve(values.size() * dim_);
  for (const auto& v : values) {
    if (v.size() != dim_) throw std::invalid_argument("Path: inconsistent value dimension");
    x_.insert(x_.end(), v.begin(), v.end());
  }
  validate();
}

Path::Path(std::vector<double> breakpoints, std::vector<double> flat_values, std::size_t dimension)
    : t_(std::move(breakpoints)), x_(std::move(flat_values)), dim_(dimension) {
  validate();
}

void Path::validate() const {
  if (dim_ == 0) throw std::invalid_argument("Path: dimension must be positive");
  if (t_.size() < 2) throw std::invalid_argument("Path: need at least two breakpoints");
  if (x_.size() != t_.size() * dim_) throw std::invalid_argument("Path: values do not match breakpoints");
  for (std::size_t i = 0; i + 1 < t_.size(); ++i) {
    if (!(t_[i] < t_[i + 1])) throw std::invalid_argument("Path: breakpoints must be strictly increasing");
  }
  for (double v : x_) {
    if (!std::isfinite(v)) throw std::invalid_argument("Path: non-finite value");
  }
}

std::size_t Path::segment_index(double t) const {
  if (!(t >= a() && t <= b())) throw std::domain_error("Path::evaluate: parameter outside domain");
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t j = static_cast<std::size_t>(it - t_.begin());
  if (j == 0) return 0;
  j -= 1;
  return std::min(j, t_.size() - 2);
}

void Path::evaluate_into(double t, std::span<double> out) const {
  const std::size_t j = segment_index(t);
  const double t0 = t_[j], t1 = t_[j + 1];
  const double* p0 = x_.data() + j * dim_;
  const double* p1 = p0 + dim_;
  if (t == t0) {
    std::copy(p0, p0 + dim_, out.begin());
    return;
  }
  if (t == t1) {
    std::copy(p1, p1 + dim_, out.begin());
    return;
  }
  const double s = (t - t0) / (t1 - t0);
  for (std::size_t k = 0; k < dim_; ++k) out[k] = p0[k] + s * (p1[k] - p0[k]);
}

Point Path::evaluate(double t) const {
  Point p(dim_);
  evaluate_into(t, p);
  return p;
}

double Path::segment_length(std::size_t j) const {
  const double* p0 = x_.data() + j * dim_;
  const double* p1 = p0 + dim_;
  if (dim_ == 1) return std::abs(p1[0] - p0[0]);
  double s = 0.0;
  for (std::size_t k = 0; k < dim_; ++k) {
    const double d = p1[k] - p0[k];
    s += d * d;
  }
  return std::sqrt(s);
}

bool Path::segment_constant(std::size_t j) const {
  const double* p0 = x_.data() + j * dim_;
  return std::equal(p0, p0 + dim_, p0 + dim_);
}

Path Path::with_generator(GeneratorInfo info) const {
  Path p = *this;
  p.gen_ = std::move(info);
  return p;
}

nlohmann::json Path::to_json() const {
  nlohmann::json vals = nlohmann::json::array();
  for (std::size_t i = 0; i < size(); ++i) {
    auto v = value(i);
    vals.push_back(std::vector<double>(v.begin(), v.end()));
  }
  nlohmann::json j{{"domain", {a(), b()}}, {"dimension", dim_}, {"breakpoints", t_}, {"values", vals}};
  if (gen_) {
    j["provenance"] = {{"generator", gen_->name}, {"params", gen_->params}, {"depth", gen_->depth}};
  }
  return j;
}

Path path_from_json(const nlohmann::json& j) {
  auto bps = j.at("breakpoints").get<std::vector<double>>();
  std::vector<Point> values;
  for (const auto& v : j.at("values")) {
    if (v.is_number()) {
      values.push_back({v.get<double>()});
    } else {
      values.push_back(v.get<Point>());
    }
  }
  Path p(std::move(bps), std::move(values));
  if (j.contains("dimension") && j.at("dimension").get<std::size_t>() != p.dimension())
    throw std::invalid_argument("Path JSON: dimension does not match values");
  if (j.contains("domain")) {
    const auto dom = j.at("domain").get<std::vector<double>>();
    if (dom.size() != 2 || dom[0] != p.a() || dom[1] != p.b())
      throw std::invalid_argument("Path JSON: domain must equal first/last breakpoint");
  }
  return p;
}

std::vector<ConstancyInterval> constancy_intervals(const Path& path) {
  std::vector<ConstancyInterval> out;
  const std::size_t n = path.segments();
  std::size_t j = 0;
  while (j < n) {
    if (!path.segment_constant(j)) {
      ++j;
      continue;
    }
    std::size_t k = j;
    while (k + 1 < n && path.segment_constant(k + 1)) ++k;
    out.push_back({path.breakpoint(j), path.breakpoint(k + 1), true, j, k + 1});
    j = k + 1;
  }
  return out;
}

double tent_height(const ConstancyInterval& c, std::size_t index) {
  return std::min(1.0, c.hi - c.lo) * std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(index, 1000)));
}

Path remove_constancy(const Path& path) {
  const auto flats = constancy_intervals(path);
  if (flats.empty()) return path;
  const std::size_t d = path.dimension();
  std::vector<double> t;
  std::vector<double> x;
  t.reserve(path.size() + flats.size());
  x.reserve((path.size() + flats.size()) * d);
  auto push = [&](double tt, std::span<const double> v) {
    t.push_back(tt);
    x.insert(x.end(), v.begin(), v.end());
  };
  std::size_t next = 0;  // next breakpoint index to copy
  for (std::size_t i = 0; i < flats.size(); ++i) {
    const auto& c = flats[i];
    for (; next <= c.first; ++next) push(path.breakpoint(next), path.value(next));
    const double h = tent_height(c, i + 1);
    std::vector<double> dir(d, 0.0);
    if (d == 1) {
      dir[0] = 1.0;
    } else if (c.first == 0) {
      dir[0] = 1.0;
    } else {
      auto p0 = path.value(c.first - 1);
      auto p1 = path.value(c.first);
      const double len = path.segment_length(c.first - 1);
      for (std::size_t k = 0; k < d; ++k) dir[k] = (p1[k] - p0[k]) / len;
    }
    std::vector<double> apex(d);
    auto base = path.value(c.first);
    for (std::size_t k = 0; k < d; ++k) apex[k] = base[k] + h * dir[k];
    push(0.5 * (c.lo + c.hi), apex);
    next = c.last;
  }
  for (; next < path.size(); ++next) push(path.breakpoint(next), path.value(next));
  Path out(std::move(t), std::move(x), d);
  if (path.generator()) out = out.with_generator(*path.generator());
  return out;
}

std::vector<double> tent_apexes(const Path& path) {
  std::vector<double> mids;
  for (const auto& c : constancy_intervals(path)) mids.push_back(0.5 * (c.lo + c.hi));
  return mids;
}

}  // namespace halfvar
