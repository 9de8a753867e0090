#include "doctest.h"

#include <cmath>

#include "halfvar/examples.hpp"
#include "halfvar/io.hpp"
#include "halfvar/kf.hpp"
#include "halfvar/variation.hpp"

using namespace halfvar;

TEST_SUITE("examples") {
  TEST_CASE("harmonic total variation approaches pi^2/3") {
    const auto b = harmonic_tent_example(2000, Spacing::harmonic);
    CHECK(std::abs(total_variation(b.path).value - M_PI * M_PI / 3) <= 1e-3);
    CHECK(harmonic_v_half(100) > 10.0);
    CHECK(b.expected == Verdict::certified);
  }

  TEST_CASE("harmonic ledger") {
    const auto b = harmonic_tent_example(30);
    bool has_basis = true;
    for (const auto& e : b.ledger) has_basis = has_basis && e.contains("basis");
    CHECK(has_basis);
    CHECK(b.to_json()["expected_verdict"] == "certified");
  }

  TEST_CASE("cantor conditions") {
    const auto ex = cantor_nonvbg_example(2, 200);
    const auto c = ex.check();
    CHECK(c.disjoint);
    CHECK(c.summable);
    CHECK(c.divergent_trend);
    CHECK(c.finite_per_gap);
    CHECK(c.separated);
    CHECK(c.contained);
    CHECK(c.a_sum <= c.a_bound);
    CHECK(c.a_bound <= c.a_bound_coarse);
    CHECK(ex.bundle.expected == Verdict::refuted);
  }

  TEST_CASE("cantor tents and sums") {
    const auto tents = cantor_tents_for_block(1, 1, 50);
    REQUIRE(tents.size() == 50);
    double s = 0.0;
    for (const auto& t : tents) {
      CHECK(t.a == doctest::Approx(std::pow(4.0, -2) / (t.k * static_cast<double>(t.k))));
      CHECK(cantor_host_level(t.generation) == 1);
      s += std::sqrt(t.a);
    }
    CHECK(s == doctest::Approx(cantor_sqrt_sum(1, 1, 50)));
    CHECK(cantor_sqrt_sum(1, 1, 50) == doctest::Approx(0.25 * harmonic_v_half(50) / 2));
    CHECK(cantor_host_level(2) == 1);
    CHECK(cantor_host_level(3) == 2);
    CHECK(cantor_host_level(4) == 1);
    CHECK(cantor_host_level(5) == 3);
    CHECK(cantor_host_level(9) == 4);
  }

  TEST_CASE("zigzag generators") {
    const Path z = random_zigzag(1, 9, 2);
    CHECK(z.size() == 11);
    CHECK(detect_K_f(z).finite_points().size() == 11);
    const auto c = certify_vbg_half(z, std::nullopt, {});
    CHECK(c.verdict == Verdict::certified);
  }

  TEST_CASE("harmonic V_1/2 diverges with the truncation") {
    const auto d = truncation_series("harmonic-tents", 64, 1, 0.5);
    CHECK(d.kind == SeriesDiagnostic::Kind::divergent);
    CHECK(d.partial_sums.back() == doctest::Approx(harmonic_v_half(64)));
  }

  TEST_CASE("lookup by name") {
    for (const char* n : {"harmonic-tents", "cantor", "zigzag", "single-corner", "affine"}) {
      CHECK(example_by_name(n, 6, 1).name == n);
    }
    CHECK_THROWS(example_by_name("nope", 3, 1));
  }
}

TEST_SUITE("io") {
  TEST_CASE("malformed json names line and column") {
    try {
      parse_json_text("{\n  \"a\": 1,\n  \"b\": }\n", "x.json");
      FAIL("expected InputError");
    } catch (const InputError& e) {
      const std::string m = e.what();
      CHECK(m.find("x.json") != std::string::npos);
      CHECK(m.find("line 3") != std::string::npos);
    }
  }

  TEST_CASE("generator form") {
    const auto lp = load_path(nlohmann::json{{"generator", "harmonic-tents"}, {"depth", 4}}, 8, 1);
    REQUIRE(lp.bundle.has_value());
    CHECK(lp.path.size() == harmonic_tent_example(4).path.size());
    CHECK_THROWS_AS(load_path(nlohmann::json{{"domain", 3}}, 8, 1), InputError);
  }

  TEST_CASE("doubles round trip") {
    for (double x : {0.1, 1.0 / 3.0, 2.0, 1e-300, 6.02214076e23}) {
      CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
    }
    CHECK(format_double(0.5) == "0.5");
  }

  TEST_CASE("csv columns") {
    const auto csv = sample_csv([](double s) { return Point{s * s, s}; }, {0.0, 1.0}, 2, 4);
    CHECK(csv.rfind("s,g0,g1,dg0,dg1,d2g0,d2g1\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  }
}
