#include "doctest.h"

#include <cmath>
#include <random>

#include "halfvar/examples.hpp"
#include "halfvar/kf.hpp"
#include "halfvar/variation.hpp"

using namespace halfvar;

namespace {

Path scalar(std::vector<double> t, std::vector<double> x) {
  std::vector<Point> v;
  for (double y : x) v.push_back(Point{y});
  return Path(std::move(t), std::move(v));
}

}  // namespace

TEST_SUITE("variation") {
  TEST_CASE("total variation") {
    CHECK(total_variation(Path({0.0, 1.0}, {Point{0.0, 0.0}, Point{0.6, 0.8}})).value == doctest::Approx(1.0));
    CHECK(total_variation(scalar({0.0, 0.5, 1.0}, {0.0, 0.7, 0.0})).value == doctest::Approx(1.4));
  }

  TEST_CASE("variation function") {
    const auto unit = variation_function(Path({2.0, 3.0}, {Point{0.0}, Point{1.0}}));
    CHECK(unit(2.5) == doctest::Approx(0.5));
    const double h = 0.3;
    const auto tent = variation_function(scalar({0.0, 0.5, 1.0}, {0.0, h, 0.0}));
    CHECK(tent(0.5) == doctest::Approx(h));
    CHECK(tent(1.0) == doctest::Approx(2 * h));
    CHECK(tent.inverse(h) == doctest::Approx(0.5));
    CHECK(tent.strictly_increasing());
  }

  TEST_CASE("interval variation clips segments") {
    const Path p = scalar({0.0, 1.0, 2.0}, {0.0, 2.0, 0.0});
    CHECK(interval_variation(p, 0.5, 1.5) == doctest::Approx(2.0));
    CHECK(interval_variation(p, 0.0, 2.0) == doctest::Approx(4.0));
  }

  TEST_CASE("fractional variation basics") {
    const ScalarFn id = [](double x) { return x; };
    CHECK(fractional_variation(id, 0.5, ClosedSet::finite({0.0, 1.0, 2.0}), 0).value == doctest::Approx(2.0));
    CHECK(fractional_variation(id, 0.5, ClosedSet::finite({0.7}), 0).value == 0.0);
    const std::vector<double> two{0.0, 1.0};
    const ScalarFn sq = [](double x) { return 3 * x * x; };
    CHECK(fractional_variation_bruteforce(sq, 0.5, two) == doctest::Approx(std::sqrt(3.0)));
  }

  TEST_CASE("bruteforce agrees on non-monotone samples") {
    // Triangle inequality plus subadditivity of u^alpha: the consecutive sum of |increments|
    // is optimal even when g is not monotone.
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
      std::vector<double> K{0.0, 0.1, 0.25, 0.4, 0.55, 0.7, 0.85, 1.0};
      std::vector<double> vals;
      for (std::size_t i = 0; i < K.size(); ++i) vals.push_back(U(rng));
      const Path g = scalar(K, vals);
      const ScalarFn f = scalar_view(g);
      double adj = 0.0;
      for (std::size_t i = 0; i + 1 < K.size(); ++i) adj += std::sqrt(std::abs(vals[i + 1] - vals[i]));
      CHECK(fractional_variation_bruteforce(f, 0.5, K) == doctest::Approx(adj).epsilon(1e-12));
    }
  }

  TEST_CASE("bruteforce refuses large sets") {
    std::vector<double> K(13);
    for (std::size_t i = 0; i < K.size(); ++i) K[i] = static_cast<double>(i);
    CHECK_THROWS(fractional_variation_bruteforce([](double x) { return x; }, 0.5, K));
  }

  TEST_CASE("harmonic 2 H_N") {
    const auto b = harmonic_tent_example(100);
    const auto kf = detect_K_f(b.path);
    const auto r = fractional_variation(scalar_view(b.path), 0.5, ClosedSet::finite(kf.finite_points()), 0);
    CHECK(r.value == doctest::Approx(harmonic_v_half(100)).epsilon(1e-12));
    CHECK(harmonic_v_half(100) == doctest::Approx(10.374755035279236).epsilon(1e-14));
  }

  TEST_CASE("series diagnostics") {
    std::vector<double> idx, conv, harm;
    for (int n = 1; n <= 64; n *= 2) {
      idx.push_back(n);
      conv.push_back(2.0 - 1.0 / n);
      harm.push_back(std::log(static_cast<double>(n)) + 0.577);
    }
    CHECK(diagnose_series(idx, conv).kind == SeriesDiagnostic::Kind::convergent);
    CHECK(diagnose_series(idx, harm).kind == SeriesDiagnostic::Kind::divergent);
  }
}

TEST_SUITE("certify") {
  TEST_CASE("finite polyline auto-certified") {
    const auto c = certify_vbg_half(random_zigzag(2, 6, 9), std::nullopt, {});
    CHECK(c.verdict == Verdict::certified);
    CHECK(c.covers_kf);
  }

  TEST_CASE("harmonic singletons certified") {
    const auto b = harmonic_tent_example(60);
    CertifyOptions o;
    o.depth = 60;
    const auto c = certify_vbg_half(b.path, b.decomposition, o);
    CHECK(c.verdict == Verdict::certified);
    CHECK(c.covers_kf);
    for (const auto& s : c.sets) CHECK(std::isfinite(s.v_half));
  }

  TEST_CASE("missing coverage is inconclusive") {
    const auto b = harmonic_tent_example(10);
    const auto c = certify_vbg_half(b.path, std::vector<ClosedSet>{ClosedSet::finite({0.0, 1.0})}, {});
    CHECK_FALSE(c.covers_kf);
    CHECK(c.verdict != Verdict::certified);
  }

  TEST_CASE("cantor refuted with a block witness") {
    const auto ex = cantor_nonvbg_example(2, 200);
    CertifyOptions o;
    o.depth = 6;
    o.refutation = ex.bundle.refutation.get();
    const auto c = certify_vbg_half(ex.bundle.path, ex.bundle.decomposition, o);
    CHECK(c.verdict == Verdict::refuted);
    REQUIRE(c.witness.contains("blocks"));
    CHECK_FALSE(c.witness["blocks"].empty());
  }
}

TEST_SUITE("kf") {
  TEST_CASE("affine segment") {
    const auto k = detect_K_f(affine_example());
    CHECK(k.finite_points() == std::vector<double>{0.0, 1.0});
  }

  TEST_CASE("zigzag corner") {
    const Path z = scalar({0.0, 0.5, 1.0}, {0.0, 1.0, 0.0});
    CHECK(detect_K_f(z).finite_points() == std::vector<double>{0.0, 0.5, 1.0});
    const Path straight({0.0, 0.5, 1.0}, {Point{0.0, 0.0}, Point{0.5, 0.5}, Point{1.0, 1.0}});
    CHECK(detect_K_f(straight).finite_points() == std::vector<double>{0.0, 1.0});
  }

  TEST_CASE("harmonic tents") {
    const int N = 12;
    const auto k = detect_K_f(harmonic_tent_example(N).path);
    std::vector<double> want{0.0};
    for (int n = 2 * N + 2; n >= 2; --n) want.push_back(harmonic_abscissa(n, Spacing::dyadic));
    want.push_back(1.0);
    CHECK(k.finite_points() == want);
    CHECK_FALSE(k.accumulation.empty());
    CHECK(k.set.contains(0.0));
  }

  TEST_CASE("random zigzag turns everywhere") {
    const Path z = random_zigzag(3, 5, 21);
    CHECK(detect_K_f(z).finite_points().size() == z.size());
    CHECK(random_zigzag(2, 0, 1).size() == 2);
    CHECK(random_zigzag(2, 5, 7).to_json().dump() == random_zigzag(2, 5, 7).to_json().dump());
  }
}
