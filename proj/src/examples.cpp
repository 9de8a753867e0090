#include "halfvar/examples.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

#include "halfvar/kf.hpp"

namespace halfvar {

namespace {

nlohmann::json fact(const std::string& what, nlohmann::json value, const std::string& basis) {
  return {{"fact", what}, {"value", std::move(value)}, {"basis", basis}};
}

double harmonic_number(int K) {
  double h = 0.0;
  for (int k = K; k >= 1; --k) h += 1.0 / k;
  return h;
}

}  // namespace

nlohmann::json ExampleBundle::to_json() const {
  nlohmann::json dec = nlohmann::json::array();
  for (const auto& s : decomposition) {
    if (dec.size() == 64) break;
    dec.push_back(s.to_json());
  }
  nlohmann::json j{{"name", name},
                   {"expected_verdict", to_string(expected)},
                   {"decomposition", dec},
                   {"decomposition_total", decomposition.size()},
                   {"ledger", ledger}};
  if (refutation) j["refutation"] = {{"argument", refutation->argument}, {"blocks", refutation->blocks.size()}};
  return j;
}

// ---------------------------------------------------------------------------------------
// Harmonic tents

std::string to_string(Spacing s) { return s == Spacing::dyadic ? "dyadic" : "harmonic"; }

Spacing spacing_from_string(const std::string& s) {
  if (s == "dyadic") return Spacing::dyadic;
  if (s == "harmonic") return Spacing::harmonic;
  throw std::invalid_argument("unknown spacing: " + s);
}

double harmonic_abscissa(int n, Spacing s) {
  return s == Spacing::dyadic ? std::ldexp(1.0, -n) : 1.0 / (static_cast<double>(n) + 1.0);
}

double harmonic_v_half(int N) {
  double s = 0.0;
  for (int k = N; k >= 1; --k) {
    s += 1.0 / k;
    s += 1.0 / k;
  }
  return s;
}

ExampleBundle harmonic_tent_example(int N, Spacing spacing) {
  if (N < 1) throw std::invalid_argument("harmonic_tent_example: N must be >= 1");
  std::vector<double> t{0.0};
  std::vector<Point> x{{0.0}};
  for (int n = 2 * N + 2; n >= 2; --n) {
    t.push_back(harmonic_abscissa(n, spacing));
    if (n % 2 == 1) {
      const double k = (n - 1) / 2;
      x.push_back({1.0 / (k * k)});
    } else {
      x.push_back({0.0});
    }
  }
  t.push_back(1.0);
  x.push_back({0.0});

  GeneratorInfo gen;
  gen.name = "harmonic-tents";
  gen.params = {{"N", N}, {"spacing", to_string(spacing)}};
  gen.depth = N;
  gen.variation_tail = 2.0 / N;
  SequenceRule rule{to_string(spacing), 2 * N + 2, 1.0, 0.0};
  gen.accumulation.push_back(ClosedSet::sequence(rule, 16));

  ExampleBundle b("harmonic-tents", Path(t, x).with_generator(gen));
  for (double p : detect_K_f(b.path).finite_points()) b.decomposition.push_back(ClosedSet::finite({p}));
  b.decomposition.push_back(ClosedSet::sequence(rule, 16));
  b.expected = Verdict::certified;

  double tv = 0.0;
  for (int k = N; k >= 1; --k) tv += 2.0 / (static_cast<double>(k) * k);
  b.ledger.push_back(fact("V(f) of the truncation = 2 sum_{k<=N} 1/k^2", tv, "direct-summation"));
  b.ledger.push_back(fact("V(f) - V(truncation) <= 2/N", 2.0 / N, "closed-form"));
  b.ledger.push_back(fact("V(f) of the full example = pi^2/3", std::numbers::pi * std::numbers::pi / 3.0, "closed-form"));
  b.ledger.push_back(fact("V_1/2(f, K_f of the truncation) = 2 H_N", harmonic_v_half(N), "direct-summation"));
  b.ledger.push_back(fact("V_1/2(f, K_f) diverges like 2 ln N", "divergent", "closed-form"));
  b.ledger.push_back(fact("singletons and the tail set {0} u {a_n : n >= 2N+2} cover K_f; v_f is constant on the tail",
                          "certified", "construction"));
  return b;
}

// ---------------------------------------------------------------------------------------
// Cantor example

int cantor_host_level(int generation) {
  if (generation < 2) return 0;
  int v = 0;
  for (int m = generation - 1; m % 2 == 0; m /= 2) ++v;
  return v + 1;
}

std::vector<CantorTent> cantor_tents_for_block(int n, int i, int k_max) {
  if (n < 1 || n > 5) throw std::invalid_argument("cantor_tents_for_block: level out of range");
  const auto nums = ClosedSet::cantor_block_numerators(n);
  if (i < 1 || i > static_cast<int>(nums.size())) throw std::out_of_range("cantor block index");
  const std::int64_t B = nums[static_cast<std::size_t>(i - 1)];
  std::vector<CantorTent> out;
  out.reserve(static_cast<std::size_t>(std::max(0, k_max)));
  const double a0 = std::ldexp(1.0, -2 * (n + i));
  for (std::int64_t j = 0; static_cast<int>(out.size()) < k_max; ++j) {
    const int g = static_cast<int>(1 + (std::int64_t{1} << (n - 1)) * (2 * j + 1));
    if (g + 1 > 38) throw std::overflow_error("cantor_tents_for_block: generation exceeds exact range");
    const int free_digits = g - 1 - n;
    const std::int64_t count = std::int64_t{1} << free_digits;
    const std::int64_t base = B * pow3(free_digits);
    for (std::int64_t q = 0; q < count && static_cast<int>(out.size()) < k_max; ++q) {
      std::int64_t L = base;
      std::int64_t p3 = 1;
      for (int d = 0; d < free_digits; ++d, p3 *= 3)
        if ((q >> d) & 1) L += 2 * p3;
      CantorTent tt;
      tt.n = n;
      tt.i = i;
      tt.k = static_cast<int>(out.size()) + 1;
      tt.generation = g;
      tt.host_left = L;
      tt.a = a0 / (static_cast<double>(tt.k) * tt.k);
      const double den = static_cast<double>(pow3(g));
      tt.host = {static_cast<double>(3 * L + 1) / den, static_cast<double>(3 * L + 2) / den};
      const double den1 = 3.0 * den;
      tt.l = static_cast<double>(9 * L + 4) / den1;
      tt.r = static_cast<double>(9 * L + 5) / den1;
      tt.c = static_cast<double>(18 * L + 9) / (2.0 * den1);
      out.push_back(tt);
    }
  }
  return out;
}

double cantor_sqrt_sum(int n, int i, int K) { return std::ldexp(1.0, -(n + i)) * harmonic_number(K); }

double cantor_a_bound() {
  const double z2 = std::numbers::pi * std::numbers::pi / 6.0;
  double s = 0.0;
  for (int n = 40; n >= 1; --n) {
    const double inner = n >= 6 ? 1.0 : 1.0 - std::ldexp(1.0, -2 * (1 << n));
    s += std::ldexp(1.0, -2 * n) * inner / 3.0 * z2;
  }
  return s;
}

nlohmann::json CantorConditions::to_json() const {
  return {{"disjoint", disjoint},
          {"summable", summable},
          {"divergent_trend", divergent_trend},
          {"finite_per_gap", finite_per_gap},
          {"separated", separated},
          {"contained", contained},
          {"a_sum", a_sum},
          {"a_bound", a_bound},
          {"a_bound_coarse", a_bound_coarse},
          {"all", all()}};
}

CantorExample cantor_nonvbg_example(int n_max, int k_max) {
  if (n_max < 1 || k_max < 1) throw std::invalid_argument("cantor_nonvbg_example: n_max and k_max must be >= 1");
  std::vector<CantorTent> tents;
  auto schema = std::make_shared<RefutationSchema>();
  schema->argument =
      "every decomposition containing C leaves a block K^n_i on which the contiguous tents give unbounded "
      "partial sums of sqrt(V(v_f, I)), 2^{-(n+i)} sqrt(2) H_K";
  const ClosedSet C = ClosedSet::cantor({0.0, 1.0});
  for (int n = 1; n <= n_max; ++n) {
    for (int i = 1; i <= (1 << n); ++i) {
      auto block = cantor_tents_for_block(n, i, k_max);
      WitnessBlock wb;
      wb.n = n;
      wb.i = i;
      wb.block = C.cantor_block(n, i);
      for (const auto& tt : block) wb.hosts.push_back(tt.host);
      const double c = std::sqrt(2.0) * std::ldexp(1.0, -(n + i));
      wb.analytic_sum = [c](int K) { return c * harmonic_number(K); };
      schema->blocks.push_back(std::move(wb));
      tents.insert(tents.end(), block.begin(), block.end());
    }
  }
  std::sort(tents.begin(), tents.end(), [](const CantorTent& x, const CantorTent& y) { return x.l < y.l; });

  std::vector<double> t{0.0};
  std::vector<Point> x{{0.0}};
  t.reserve(3 * tents.size() + 2);
  x.reserve(3 * tents.size() + 2);
  long double a_sum = 0.0L;
  for (const auto& tt : tents) {
    t.insert(t.end(), {tt.l, tt.c, tt.r});
    x.push_back({0.0});
    x.push_back({tt.a});
    x.push_back({0.0});
    a_sum += tt.a;
  }
  t.push_back(1.0);
  x.push_back({0.0});

  GeneratorInfo gen;
  gen.name = "cantor";
  gen.params = {{"n_max", n_max}, {"k_max", k_max}};
  gen.depth = k_max;
  gen.variation_tail = std::max(0.0, 2.0 * (cantor_a_bound() - static_cast<double>(a_sum)));
  gen.accumulation.push_back(C);

  CantorExample ex{ExampleBundle("cantor", Path(std::move(t), std::move(x)).with_generator(gen)), std::move(tents),
                   n_max, k_max};
  auto& b = ex.bundle;
  b.decomposition.push_back(C);
  for (const auto& tt : ex.tents) b.decomposition.push_back(ClosedSet::finite({tt.l, tt.c, tt.r}));
  b.expected = Verdict::refuted;
  b.refutation = schema;
  b.ledger.push_back(fact("sum a_nik over all n, i, k <= sum_n 4^{-n} (1 - 4^{-2^n}) / 3 * pi^2/6", cantor_a_bound(),
                          "closed-form"));
  b.ledger.push_back(fact("sum a_nik over all n, i, k < pi^2/18", std::numbers::pi * std::numbers::pi / 18.0,
                          "closed-form"));
  b.ledger.push_back(fact("sum of enumerated a_nik", static_cast<double>(a_sum), "direct-summation"));
  b.ledger.push_back(fact("sum_{k<=K} sqrt(a_nik) = 2^{-(n+i)} H_K, unbounded in K", "divergent", "closed-form"));
  b.ledger.push_back(fact("hosts are distinct contiguous intervals of C inside K^n_i of generation > n", "all hosts",
                          "construction"));
  b.ledger.push_back(fact("f is not VBG_1/2 although every tent corner set is finite", "refuted", "construction"));
  return ex;
}

CantorConditions CantorExample::check() const {
  CantorConditions cc;
  cc.a_bound = cantor_a_bound();
  cc.a_bound_coarse = std::numbers::pi * std::numbers::pi / 18.0;

  auto host_lo = [](const CantorTent& t) { return Rational(3 * t.host_left + 1, pow3(t.generation)); };
  auto host_hi = [](const CantorTent& t) { return Rational(3 * t.host_left + 2, pow3(t.generation)); };
  auto tent_l = [](const CantorTent& t) { return Rational(9 * t.host_left + 4, pow3(t.generation + 1)); };
  auto tent_r = [](const CantorTent& t) { return Rational(9 * t.host_left + 5, pow3(t.generation + 1)); };

  // (i) closures of consecutive tents (sorted by l) do not meet.
  cc.disjoint = true;
  for (std::size_t j = 0; j + 1 < tents.size(); ++j)
    if (!(tent_r(tents[j]) < tent_l(tents[j + 1]))) cc.disjoint = false;

  // (ii) partial sums, in enumeration order, stay below the closed-form bound.
  long double s = 0.0L;
  bool monotone = true;
  for (const auto& t : tents) {
    const long double next = s + t.a;
    if (!(next >= s)) monotone = false;
    s = next;
  }
  cc.a_sum = static_cast<double>(s);
  cc.summable = monotone && cc.a_sum <= cc.a_bound && cc.a_bound < cc.a_bound_coarse;

  // (iii) per block: S(K0 e^2) - S(K0) reaches the harmonic lower bound ln((M+1)/(K0+1)),
  // and that bound is near 2, so partial sums grow without bound.
  cc.divergent_trend = true;
  {
    const int K0 = std::max(1, static_cast<int>(std::floor(k_max / std::exp(2.0))));
    const int M = std::min(k_max, static_cast<int>(std::floor(K0 * std::exp(2.0))));
    const double lower = std::log((M + 1.0) / (K0 + 1.0));
    if (k_max < 8 || lower < 1.5) cc.divergent_trend = false;
    for (int n = 1; n <= n_max && cc.divergent_trend; ++n) {
      for (int i = 1; i <= (1 << n); ++i) {
        double sK0 = 0.0, sM = 0.0;
        for (const auto& t : tents) {
          if (t.n != n || t.i != i) continue;
          if (t.k <= K0) sK0 += std::sqrt(t.a);
          if (t.k <= M) sM += std::sqrt(t.a);
        }
        if (!(sM - sK0 >= std::ldexp(1.0, -(n + i)) * lower * (1.0 - 1e-12))) cc.divergent_trend = false;
      }
    }
  }

  // (iv) each contiguous interval hosts exactly one tent.
  std::set<std::pair<int, std::int64_t>> hosts;
  for (const auto& t : tents) hosts.insert({t.generation, t.host_left});
  cc.finite_per_gap = hosts.size() == tents.size();

  // (v) host endpoints are points of C strictly outside every tent closure.
  cc.separated = true;
  for (const auto& t : tents) {
    const Rational lo = host_lo(t), hi = host_hi(t);
    if (!(lo < tent_l(t) && tent_r(t) < hi && ClosedSet::cantor_contains_unit(lo) &&
          ClosedSet::cantor_contains_unit(hi) && !ClosedSet::cantor_contains_unit(tent_l(t)))) {
      cc.separated = false;
      break;
    }
  }

  // (vi) host inside K^n_i, with length below 3^{-n}.
  cc.contained = true;
  std::vector<std::vector<std::int64_t>> nums(static_cast<std::size_t>(n_max) + 1);
  for (int n = 1; n <= n_max; ++n) nums[static_cast<std::size_t>(n)] = ClosedSet::cantor_block_numerators(n);
  for (const auto& t : tents) {
    const std::int64_t B = nums[static_cast<std::size_t>(t.n)][static_cast<std::size_t>(t.i - 1)];
    const Rational blo(B, pow3(t.n)), bhi(B + 1, pow3(t.n));
    if (!(blo <= host_lo(t) && host_hi(t) <= bhi && t.generation > t.n)) {
      cc.contained = false;
      break;
    }
  }
  return cc;
}

// ---------------------------------------------------------------------------------------
// Zigzags

Path random_zigzag(std::size_t d, std::size_t corners, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("random_zigzag: dimension must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> t{0.0, 1.0};
  while (t.size() < corners + 2) {
    const double s = unit(rng);
    if (s > 0.0 && std::find(t.begin(), t.end(), s) == t.end()) t.push_back(s);
  }
  std::sort(t.begin(), t.end());

  std::vector<Point> x;
  auto draw = [&] {
    Point p(d);
    for (auto& c : p) c = unit(rng);
    return p;
  };
  x.push_back(draw());
  if (d == 1) {
    bool up = unit(rng) < 0.5;
    while (x.size() < t.size()) {
      const double v = x.back()[0];
      const double next = up ? v + (1.0 - v) * unit(rng) : v * unit(rng);
      if (next == v) continue;
      x.push_back({next});
      up = !up;
    }
  } else {
    while (x.size() < t.size()) {
      Point p = draw();
      if (p == x.back()) continue;
      if (x.size() >= 2) {
        const Path probe({0.0, 1.0, 2.0}, {x[x.size() - 2], x.back(), p});
        if (same_direction(probe, 0, 1, 1e-9)) continue;
      }
      x.push_back(std::move(p));
    }
  }
  GeneratorInfo gen;
  gen.name = "zigzag";
  gen.params = {{"d", d}, {"corners", corners}, {"seed", seed}};
  gen.depth = static_cast<int>(corners);
  gen.variation_tail = 0.0;
  return Path(std::move(t), std::move(x)).with_generator(gen);
}

Path single_corner_zigzag() { return Path({0.0, 1.0, 2.0}, {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}}); }

Path affine_example() { return Path({0.0, 1.0}, {{0.0, 0.0}, {1.0, 2.0}}); }

ExampleBundle example_by_name(const std::string& name, int depth, std::uint64_t seed) {
  auto finite_bundle = [](std::string nm, Path p) {
    ExampleBundle b(std::move(nm), std::move(p));
    b.decomposition.push_back(ClosedSet::finite(detect_K_f(b.path).finite_points()));
    b.expected = Verdict::certified;
    b.ledger.push_back(fact("K_f is finite, so V_1/2(v_f, K_f) is a finite sum", "certified", "construction"));
    return b;
  };
  if (name == "harmonic-tents") return harmonic_tent_example(std::max(1, depth));
  if (name == "cantor") return cantor_nonvbg_example(4, std::max(1, depth)).bundle;
  if (name == "zigzag") return finite_bundle(name, random_zigzag(2, static_cast<std::size_t>(std::max(0, depth)), seed));
  if (name == "single-corner") return finite_bundle(name, single_corner_zigzag());
  if (name == "affine") return finite_bundle(name, affine_example());
  throw std::invalid_argument("unknown example: " + name);
}

SeriesDiagnostic truncation_series(const std::string& name, int depth, std::uint64_t seed, double alpha) {
  std::vector<int> ds;
  for (int d = 1; d < depth; d *= 2) ds.push_back(d);
  ds.push_back(depth);
  std::vector<double> index, sums;
  for (int d : ds) {
    const Path p = example_by_name(name, d, seed).path;
    const auto pts = detect_K_f(p).finite_points();
    index.push_back(d);
    sums.push_back(consecutive_power_sum(scalar_view(p), alpha, pts));
  }
  return diagnose_series(std::move(index), std::move(sums));
}

}  // namespace halfvar
