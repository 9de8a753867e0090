#include "halfvar/variation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace halfvar {

VariationValue total_variation(const Path& path) {
  VariationValue out;
  for (std::size_t j = 0; j < path.segments(); ++j) out.value += path.segment_length(j);
  if (const auto& gen = path.generator()) {
    out.tail = gen->variation_tail;
    out.inconclusive = !gen->variation_tail.has_value();
  }
  return out;
}

double interval_variation(const Path& path, double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("interval_variation: empty interval");
  const std::size_t j0 = path.segment_index(lo);
  const std::size_t j1 = path.segment_index(hi);
  double s = 0.0;
  for (std::size_t j = j0; j <= j1; ++j) {
    const double a = path.breakpoint(j), b = path.breakpoint(j + 1);
    const double x = std::max(lo, a), y = std::min(hi, b);
    if (y <= x) continue;
    s += (x == a && y == b) ? path.segment_length(j) : path.segment_length(j) * ((y - x) / (b - a));
  }
  return s;
}

VariationFunction::VariationFunction(const Path& path) : t_(path.breakpoints()) {
  s_.resize(t_.size());
  s_[0] = 0.0;
  for (std::size_t j = 0; j < path.segments(); ++j) s_[j + 1] = s_[j] + path.segment_length(j);
}

VariationFunction variation_function(const Path& path) { return VariationFunction(path); }

double VariationFunction::operator()(double t) const {
  if (!(t >= t_.front() && t <= t_.back())) throw std::domain_error("v_f: parameter outside domain");
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t j = static_cast<std::size_t>(it - t_.begin());
  if (j == 0) return s_[0];
  j = std::min(j - 1, t_.size() - 2);
  if (t == t_[j]) return s_[j];
  if (t == t_[j + 1]) return s_[j + 1];
  return s_[j] + (s_[j + 1] - s_[j]) * ((t - t_[j]) / (t_[j + 1] - t_[j]));
}

double VariationFunction::inverse(double s) const {
  if (!(s >= 0.0 && s <= s_.back())) throw std::domain_error("v_f inverse: value outside range");
  auto it = std::lower_bound(s_.begin(), s_.end(), s);
  std::size_t j = static_cast<std::size_t>(it - s_.begin());
  if (s_[j] == s) return t_[j];
  j -= 1;
  return t_[j] + (t_[j + 1] - t_[j]) * ((s - s_[j]) / (s_[j + 1] - s_[j]));
}

bool VariationFunction::strictly_increasing() const {
  for (std::size_t j = 0; j + 1 < s_.size(); ++j)
    if (!(s_[j] < s_[j + 1])) return false;
  return true;
}

double consecutive_power_sum(const ScalarFn& g, double alpha, std::span<const double> pts) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("fractional variation: alpha must lie in (0,1)");
  if (pts.size() < 2) return 0.0;
  double sum = 0.0;
  double prev = g(pts[0]);
  for (std::size_t k = 1; k < pts.size(); ++k) {
    const double cur = g(pts[k]);
    const double d = std::abs(cur - prev);
    sum += alpha == 0.5 ? std::sqrt(d) : std::pow(d, alpha);
    prev = cur;
  }
  return sum;
}

std::string SeriesDiagnostic::kind_name() const {
  switch (kind) {
    case Kind::exact:
      return "exact";
    case Kind::convergent:
      return "convergent";
    case Kind::divergent:
      return "divergent";
    case Kind::undetermined:
      return "undetermined";
  }
  return "undetermined";
}

nlohmann::json SeriesDiagnostic::to_json() const {
  return {{"kind", kind_name()},
          {"index", index},
          {"partial_sums", partial_sums},
          {"increment_exponent", increment_exponent},
          {"log_coefficient", log_coefficient},
          {"monotone", monotone}};
}

namespace {

double slope(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

SeriesDiagnostic diagnose_series(std::vector<double> index, std::vector<double> partial_sums) {
  SeriesDiagnostic d;
  d.index = std::move(index);
  d.partial_sums = std::move(partial_sums);
  const std::size_t n = d.partial_sums.size();
  if (n != d.index.size()) throw std::invalid_argument("diagnose_series: size mismatch");
  for (std::size_t k = 1; k < n; ++k) {
    if (d.partial_sums[k] < d.partial_sums[k - 1] * (1.0 - 1e-12)) d.monotone = false;
  }
  if (n < 4) return d;

  std::vector<double> lx;
  for (double x : d.index) lx.push_back(std::log(std::max(x, 1e-300)));
  d.log_coefficient = slope(lx, d.partial_sums);

  // Growth rate per unit index: S'(x) ~ x^{-q}; divergence iff q <= 1.
  std::vector<double> lmid, lrate;
  std::vector<double> rates;
  for (std::size_t k = n / 2; k + 1 < n; ++k) {
    const double dx = d.index[k + 1] - d.index[k];
    const double ds = d.partial_sums[k + 1] - d.partial_sums[k];
    if (dx <= 0.0) continue;
    rates.push_back(ds / dx);
    if (ds > 0.0) {
      lmid.push_back(std::log(0.5 * (d.index[k] + d.index[k + 1])));
      lrate.push_back(std::log(ds / dx));
    }
  }
  const bool stalled = std::all_of(rates.begin(), rates.end(), [](double r) { return r == 0.0; });
  if (stalled) {
    d.kind = SeriesDiagnostic::Kind::convergent;
    d.increment_exponent = INFINITY;
    return d;
  }
  if (lmid.size() < 2) return d;
  d.increment_exponent = -slope(lmid, lrate);
  std::vector<double> ratios;
  for (std::size_t k = 1; k < rates.size(); ++k)
    if (rates[k - 1] > 0.0) ratios.push_back(rates[k] / rates[k - 1]);
  std::sort(ratios.begin(), ratios.end());
  const bool geometric = !ratios.empty() && ratios[ratios.size() / 2] < 0.75 && d.increment_exponent > 1.4;
  if (d.increment_exponent <= 1.1) {
    d.kind = SeriesDiagnostic::Kind::divergent;
  } else if (d.increment_exponent >= 1.4 || geometric) {
    d.kind = SeriesDiagnostic::Kind::convergent;
  }
  return d;
}

FracVarResult fractional_variation(const ScalarFn& g, double alpha, const ClosedSet& K, int depth,
                                   std::vector<int> ladder) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("fractional variation: alpha must lie in (0,1)");
  FracVarResult res;
  res.depth = depth;
  const auto pts = K.points(depth);
  res.points = pts.size();
  res.value = consecutive_power_sum(g, alpha, pts);
  if (K.is_finite()) {
    res.diagnostic.kind = SeriesDiagnostic::Kind::exact;
    res.diagnostic.index = {static_cast<double>(depth)};
    res.diagnostic.partial_sums = {res.value};
    return res;
  }
  if (ladder.empty()) {
    const int lo = std::max(1, depth / 64);
    for (int d = lo; d <= depth; d += std::max(1, depth / 64)) ladder.push_back(d);
    if (ladder.empty() || ladder.back() != depth) ladder.push_back(depth);
  }
  std::vector<double> idx, sums;
  int last = -1;
  for (int d : ladder) {
    // Depths past a cap enumerate the same points.
    const int e = K.effective_depth(d);
    if (e == last && d != depth) continue;
    last = e;
    idx.push_back(static_cast<double>(d));
    sums.push_back(d == depth ? res.value : consecutive_power_sum(g, alpha, K.points(d)));
  }
  res.diagnostic = diagnose_series(std::move(idx), std::move(sums));
  res.monotone_in_depth = res.diagnostic.monotone;
  return res;
}

namespace {

// Every collection is an ordered chain [p_{i1}, p_{j1}], [p_{i2}, p_{j2}], ... with
// j_k <= i_{k+1}; each chain is visited exactly once.
double enumerate_collections(const std::vector<std::vector<double>>& term, std::size_t from, double acc) {
  double best = acc;
  const std::size_t n = term.size();
  for (std::size_t i = from; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) best = std::max(best, enumerate_collections(term, j, acc + term[i][j]));
  return best;
}

}  // namespace

double fractional_variation_bruteforce(const ScalarFn& g, double alpha, std::span<const double> K) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("fractional variation: alpha must lie in (0,1)");
  if (K.size() > 12) throw std::invalid_argument("brute-force fractional variation refuses more than 12 points");
  std::vector<double> pts(K.begin(), K.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<double> gv;
  for (double p : pts) gv.push_back(g(p));
  const std::size_t n = pts.size();
  std::vector<std::vector<double>> term(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) term[i][j] = std::pow(std::abs(gv[j] - gv[i]), alpha);
  return enumerate_collections(term, 0, 0.0);
}

ScalarFn scalar_view(const Path& path) {
  return [&path](double t) { return path.evaluate(t)[0]; };
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::certified:
      return "certified";
    case Verdict::refuted:
      return "refuted";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

nlohmann::json Certificate::to_json() const {
  // Long decompositions are abbreviated to their first 64 sets.
  nlohmann::json sets_j = nlohmann::json::array();
  for (const auto& s : sets) {
    if (sets_j.size() == 64) break;
    sets_j.push_back({{"set", s.set.to_json()},
                      {"v_half", s.v_half},
                      {"depth", s.depth},
                      {"finite", s.finite_set},
                      {"diagnostic", s.diagnostic.to_json()}});
  }
  nlohmann::json tv{{"value", total_variation.value}, {"tail", nullptr}};
  if (total_variation.tail) tv["tail"] = *total_variation.tail;
  return {{"verdict", to_string(verdict)},
          {"total_variation", tv},
          {"sets", sets_j},
          {"sets_total", sets.size()},
          {"covers_kf", covers_kf},
          {"witness", witness},
          {"notes", notes}};
}

namespace {

bool evaluate_refutation(const RefutationSchema& schema, const Path& path, nlohmann::json& witness) {
  if (schema.blocks.empty()) return false;
  nlohmann::json blocks = nlohmann::json::array();
  bool all = true;
  for (const auto& blk : schema.blocks) {
    std::vector<double> idx, sums, analytic;
    double s = 0.0;
    std::size_t next_check = 1;
    double max_rel = 0.0;
    for (std::size_t k = 0; k < blk.hosts.size(); ++k) {
      s += std::sqrt(interval_variation(path, blk.hosts[k].lo, blk.hosts[k].hi));
      if (k + 1 == next_check || k + 1 == blk.hosts.size()) {
        const double a = blk.analytic_sum(static_cast<int>(k + 1));
        idx.push_back(static_cast<double>(k + 1));
        sums.push_back(s);
        analytic.push_back(a);
        max_rel = std::max(max_rel, std::abs(s - a) / a);
        next_check *= 2;
      }
    }
    auto diag = diagnose_series(idx, sums);
    const bool ok = diag.kind == SeriesDiagnostic::Kind::divergent && max_rel <= 1e-9;
    all = all && ok;
    if (blocks.size() < 4) {
      blocks.push_back({{"n", blk.n},
                        {"i", blk.i},
                        {"block", {blk.block.lo, blk.block.hi}},
                        {"hosts", blk.hosts.size()},
                        {"partial_sums", sums},
                        {"analytic", analytic},
                        {"max_relative_gap", max_rel},
                        {"diagnostic", diag.to_json()},
                        {"divergent", ok}});
    }
  }
  witness = {{"argument", schema.argument}, {"blocks_checked", schema.blocks.size()}, {"blocks", blocks}};
  return all;
}

}  // namespace

Certificate certify_vbg_half(const Path& path, std::optional<std::vector<ClosedSet>> proposed, const CertifyOptions& opts) {
  Certificate cert;
  cert.total_variation = total_variation(path);
  if (cert.total_variation.inconclusive) {
    cert.notes.push_back("generator path without a variation tail bound: bounded variation not certified");
  }
  const KfSet kf = detect_K_f(path);
  const VariationFunction vf(path);
  const ScalarFn g = [&vf](double t) { return vf(t); };

  if (!proposed) {
    if (kf.set.is_finite()) {
      proposed = std::vector<ClosedSet>{kf.set};
      cert.notes.push_back("auto: finite K_f used as its own decomposition");
    } else {
      cert.notes.push_back("auto: K_f is infinite and no decomposition was supplied");
      cert.verdict = Verdict::inconclusive;
      return cert;
    }
  }

  bool any_divergent = false, all_finite = true;
  for (const auto& A : *proposed) {
    SetReport rep{A, 0.0, opts.depth, A.is_finite(), {}};
    auto fv = fractional_variation(g, 0.5, A, opts.depth, opts.ladder);
    rep.v_half = fv.value;
    rep.diagnostic = fv.diagnostic;
    if (rep.diagnostic.kind == SeriesDiagnostic::Kind::divergent) any_divergent = true;
    if (rep.diagnostic.kind != SeriesDiagnostic::Kind::exact && rep.diagnostic.kind != SeriesDiagnostic::Kind::convergent)
      all_finite = false;
    cert.sets.push_back(std::move(rep));
  }

  // Coverage of K_f at the working depth. Finite sets are pooled for a sorted lookup.
  std::vector<double> pooled;
  std::vector<const ClosedSet*> others;
  for (const auto& A : *proposed) {
    if (A.kind() == ClosedSet::Kind::finite) {
      pooled.insert(pooled.end(), A.finite_points().begin(), A.finite_points().end());
    } else {
      others.push_back(&A);
    }
  }
  std::sort(pooled.begin(), pooled.end());
  auto covered = [&](double x) {
    if (std::binary_search(pooled.begin(), pooled.end(), x)) return true;
    return std::any_of(others.begin(), others.end(), [x](const ClosedSet* A) { return A->contains(x); });
  };
  cert.covers_kf = std::all_of(kf.points.begin(), kf.points.end(), [&](const KfPoint& p) { return covered(p.t); });
  for (const auto& acc : kf.accumulation) {
    for (double x : acc.points(opts.depth)) cert.covers_kf = cert.covers_kf && covered(x);
  }

  if (opts.refutation) {
    if (evaluate_refutation(*opts.refutation, path, cert.witness)) {
      cert.verdict = Verdict::refuted;
      cert.notes.push_back("every witness block has divergent sqrt-variation sums over contiguous intervals");
      return cert;
    }
    cert.notes.push_back("refutation schema supplied but not confirmed at this depth");
  }
  if (cert.total_variation.inconclusive) {
    cert.verdict = Verdict::inconclusive;
  } else if (!cert.covers_kf) {
    cert.verdict = Verdict::inconclusive;
    cert.notes.push_back("proposed sets do not cover K_f at the working depth");
  } else if (all_finite) {
    cert.verdict = Verdict::certified;
  } else {
    cert.verdict = Verdict::inconclusive;
    if (any_divergent) cert.notes.push_back("V_1/2 partial sums diverge on some set; no analytic witness available");
  }
  return cert;
}

}  // namespace halfvar
