#include "doctest.h"

#include <cmath>

#include "halfvar/examples.hpp"
#include "halfvar/kernels.hpp"
#include "halfvar/reparam.hpp"
#include "halfvar/verify.hpp"

using namespace halfvar;

TEST_SUITE("verify") {
  TEST_CASE("ladder") {
    const auto l = standard_ladder();
    REQUIRE(l.size() == 15);
    CHECK(l.front() == std::ldexp(1.0, -6));
    CHECK(l.back() == std::ldexp(1.0, -20));
    for (std::size_t j = 0; j + 1 < l.size(); ++j) CHECK(l[j + 1] == 0.5 * l[j]);
    CHECK(ladder_tolerance(1e-9) == 1e-5);
    CHECK(local_ladder(l, 1e-3).size() == 11);
    CHECK(local_ladder(l, 1e-12).size() == 4);
  }

  TEST_CASE("first derivative of x^2") {
    const PathFn g = [](double x) { return Point{x * x}; };
    const auto r = fd_first_derivative(g, {0.0, 2.0}, 1.0);
    CHECK(r.verdict == DiffVerdict::exists);
    CHECK(std::abs(r.quotient.back()[0] - 2.0) <= 1e-6);
  }

  TEST_CASE("second derivative of x^3") {
    const PathFn g = [](double x) { return Point{x * x * x}; };
    const auto r = fd_second_derivative(g, {0.0, 2.0}, 1.0);
    CHECK(r.verdict == DiffVerdict::exists);
    CHECK(std::abs(r.estimate[0] - 6.0) <= 1e-4);
  }

  TEST_CASE("second derivative near the end uses one-sided rungs only where needed") {
    const PathFn g = [](double x) { return Point{std::sin(x)}; };
    const double x = 1.0 - 1e-3;
    const auto r = fd_second_derivative(g, {0.0, 1.0}, x);
    CHECK(r.verdict == DiffVerdict::exists);
    CHECK(r.estimate[0] == doctest::Approx(-std::sin(x)).epsilon(1e-3));
  }

  TEST_CASE("raw zigzag corner is not differentiable") {
    const Path z = single_corner_zigzag();
    const PathFn g = [&](double t) { return z.evaluate(t); };
    CHECK(fd_first_derivative(g, z.domain(), 1.0).verdict == DiffVerdict::not_differentiable);
  }

  TEST_CASE("reparametrized single corner") {
    const Reparametrization r(single_corner_zigzag(), {});
    const PathFn g = [&](double s) { return r.g(s); };
    for (const auto& c : r.corners()) {
      const auto d1 = fd_first_derivative(g, r.domain(), c.s);
      CHECK(d1.verdict == DiffVerdict::exists);
      for (double e : d1.estimate) CHECK(std::abs(e) <= 1e-5);
      CHECK(quadratic_ratio(g, r.domain(), c.s).bounded);
    }
    const double xc = r.corners()[1].s;
    const auto d2 = fd_second_derivative(g, r.domain(), xc, standard_ladder(), true);
    CHECK(d2.second_derivative_zero);
    for (double s : off_corner_points(r.domain(), {0.0, xc, 2.0}, 20, 3)) {
      CHECK(fd_second_derivative(g, r.domain(), s).verdict == DiffVerdict::exists);
    }
  }

  TEST_CASE("off-corner points are dyadic and guarded") {
    const auto pts = off_corner_points({0.0, 1.0}, {0.0, 0.5, 1.0}, 200, 9);
    CHECK(pts.size() == 200);
    for (double s : pts) {
      CHECK(std::ldexp(s, 30) == std::round(std::ldexp(s, 30)));
      CHECK(std::abs(s - 0.5) >= 1e-3);
    }
  }

  TEST_CASE("vartimes holds and halved constant fails") {
    const auto b = harmonic_tent_example(10);
    ReparamOptions o;
    o.decomposition = b.decomposition;
    const Reparametrization r(b.path, o);
    const auto full = vartimes_all(r, 2000, 1, 1.0, Exec::serial);
    for (const auto& v : full) CHECK(v.pass);
    const auto half = vartimes_all(r, 2000, 1, 0.5, Exec::serial);
    CHECK(std::any_of(half.begin(), half.end(), [](const VartimesReport& v) { return !v.pass; }));
    const auto y_eq_z = check_vartimes_w(r.g0(), r.w(), r.corners()[3].arc, r.corners()[3].C, 0, 1);
    CHECK(y_eq_z.pass);
  }

  TEST_CASE("image measure") {
    const auto id = [](double x) { return x; };
    for (int D = 1; D <= 8; ++D) {
      const double e = image_measure_estimate(id, ClosedSet::cantor({0.0, 1.0}), D, {0.0, 1.0}, {0.0, 1.0});
      CHECK(e == doctest::Approx(std::pow(2.0 / 3.0, D)).epsilon(1e-12));
      const Rational x = cantor_identity_measure_exact(D);
      CHECK(x.to_double() == doctest::Approx(std::pow(2.0 / 3.0, D)).epsilon(1e-15));
    }
    CHECK(image_measure_estimate(id, ClosedSet::finite({0.0, 0.3, 1.0}), 1, {0.0, 1.0}, {0.0, 1.0}) == 0.0);
  }
}

TEST_SUITE("kernels") {
  TEST_CASE("serial and parallel agree") {
    const auto xs = uniform_grid({0.0, 3.0}, 5000);
    const auto f = [](double x) { return std::sin(x) * std::exp(-x); };
    CHECK(evaluate_grid(f, xs, Exec::serial) == evaluate_grid(f, xs, Exec::parallel));

    const auto a = oracle_sweep(42, 200, 8, 1e-12, Exec::serial);
    const auto b = oracle_sweep(42, 200, 8, 1e-12, Exec::parallel);
    CHECK(a.mismatches == 0);
    CHECK(a.max_abs_diff == b.max_abs_diff);

    const Reparametrization r(single_corner_zigzag(), {});
    const auto vs = vartimes_all(r, 500, 2, 1.0, Exec::serial);
    const auto vp = vartimes_all(r, 500, 2, 1.0, Exec::parallel);
    REQUIRE(vs.size() == vp.size());
    for (std::size_t i = 0; i < vs.size(); ++i) CHECK(vs[i].max_ratio == vp[i].max_ratio);
  }

  TEST_CASE("small speed fraction is monotone in delta") {
    const Reparametrization r(single_corner_zigzag(), {});
    const auto grid = uniform_grid(r.domain(), 4000);
    const double a = small_speed_fraction(r, grid, 1e-2, Exec::parallel);
    const double b = small_speed_fraction(r, grid, 1e-4, Exec::serial);
    CHECK(b <= a);
    CHECK(b == small_speed_fraction(r, grid, 1e-4, Exec::parallel));
  }
}
