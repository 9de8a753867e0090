#include "doctest.h"

#include <cmath>

#include "halfvar/closed_set.hpp"
#include "halfvar/examples.hpp"
#include "halfvar/path.hpp"

using namespace halfvar;

TEST_SUITE("path") {
  TEST_CASE("affine midpoint and endpoints") {
    Path p({0.0, 1.0}, {Point{0.0, 0.0}, Point{1.0, 1.0}});
    const Point m = p.evaluate(0.5);
    CHECK(m[0] == doctest::Approx(0.5));
    CHECK(m[1] == doctest::Approx(0.5));
    CHECK(p.evaluate(p.a()) == Point{0.0, 0.0});
    CHECK(p.evaluate(p.b()) == Point{1.0, 1.0});
  }

  TEST_CASE("breakpoint values are exact") {
    const Path z = random_zigzag(3, 7, 11);
    for (std::size_t i = 0; i < z.size(); ++i) {
      const Point v = z.evaluate(z.breakpoint(i));
      for (std::size_t c = 0; c < 3; ++c) CHECK(v[c] == z.value(i)[c]);
    }
  }

  TEST_CASE("harmonic tent peak") {
    const auto b = harmonic_tent_example(10);
    CHECK(b.path.evaluate(harmonic_abscissa(3, Spacing::dyadic))[0] == 1.0);
    CHECK(b.path.evaluate(harmonic_abscissa(5, Spacing::dyadic))[0] == doctest::Approx(0.25));
  }

  TEST_CASE("invalid breakpoints rejected") {
    CHECK_THROWS_AS(Path({0.0, 0.0}, {Point{0.0}, Point{1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(Path({1.0, 0.0}, {Point{0.0}, Point{1.0}}), std::invalid_argument);
    CHECK_THROWS(Path({0.0, 1.0}, {Point{0.0}}));
  }

  TEST_CASE("constancy intervals") {
    CHECK(constancy_intervals(Path({0.0, 0.5, 1.0}, {Point{0.0}, Point{1.0}, Point{3.0}})).empty());
    const auto c = constancy_intervals(Path({0.0, 0.5, 1.0}, {Point{0.0}, Point{0.0}, Point{1.0}}));
    REQUIRE(c.size() == 1);
    CHECK(c[0].lo == 0.0);
    CHECK(c[0].hi == 0.5);

    const double w = 0.3;
    const Path flat_top({0.0, 0.2, 0.2 + w, 1.0}, {Point{0.0}, Point{1.0}, Point{1.0}, Point{0.0}});
    const auto ft = constancy_intervals(flat_top);
    REQUIRE(ft.size() == 1);
    CHECK(ft[0].hi - ft[0].lo == doctest::Approx(w));
  }

  TEST_CASE("remove_constancy") {
    const Path mono({0.0, 0.5, 1.0}, {Point{0.0}, Point{1.0}, Point{3.0}});
    const Path same = remove_constancy(mono);
    CHECK(same.breakpoints() == mono.breakpoints());
    CHECK(same.flat_values() == mono.flat_values());

    const Path f({0.0, 1.0, 2.0, 3.0}, {Point{0.0}, Point{1.0}, Point{1.0}, Point{2.0}});
    const Path ft = remove_constancy(f);
    CHECK(constancy_intervals(ft).empty());
    // First constancy interval: h_1 = min(1, 1) * 2^{-1}.
    CHECK(ft.evaluate(1.5)[0] == doctest::Approx(1.5));
    CHECK(ft.evaluate(1.0)[0] == 1.0);
    CHECK(ft.evaluate(2.0)[0] == 1.0);
  }

  TEST_CASE("json round trip") {
    const Path z = random_zigzag(2, 5, 3);
    const Path back = path_from_json(z.to_json());
    CHECK(back.breakpoints() == z.breakpoints());
    CHECK(back.flat_values() == z.flat_values());
  }

  TEST_CASE("refinement keeps breakpoints") {
    const auto coarse = harmonic_tent_example(5).path.breakpoints();
    const auto fine = harmonic_tent_example(9).path.breakpoints();
    for (double t : coarse) CHECK(std::binary_search(fine.begin(), fine.end(), t));
  }
}

TEST_SUITE("closed-sets") {
  TEST_CASE("finite contiguous intervals") {
    const auto r = ClosedSet::finite({0.0, 0.5, 1.0}).contiguous_intervals();
    REQUIRE(r.intervals.size() == 2);
    CHECK(r.intervals[0].lo == 0.0);
    CHECK(r.intervals[0].hi == 0.5);
    CHECK(r.intervals[1].hi == 1.0);
    const auto two = ClosedSet::finite({0.0, 1.0}).contiguous_intervals();
    REQUIRE(two.intervals.size() == 1);
    CHECK(two.intervals[0].lo == 0.0);
    CHECK(two.intervals[0].hi == 1.0);
  }

  TEST_CASE("cantor depth 2") {
    const auto C = ClosedSet::cantor({0.0, 1.0});
    const auto r = C.contiguous_intervals(2);
    REQUIRE(r.intervals.size() == 3);
    CHECK(r.intervals[0].lo == doctest::Approx(1.0 / 9));
    CHECK(r.intervals[0].hi == doctest::Approx(2.0 / 9));
    CHECK(r.intervals[1].lo == doctest::Approx(1.0 / 3));
    CHECK(r.intervals[1].hi == doctest::Approx(2.0 / 3));
    CHECK(r.intervals[2].lo == doctest::Approx(7.0 / 9));
    double total = 0.0;
    for (const auto& g : r.intervals) total += g.length();
    CHECK(total == doctest::Approx(5.0 / 9));
    for (int D = 1; D <= 10; ++D) {
      double t = 0.0;
      for (const auto& g : C.contiguous_intervals(D).intervals) t += g.length();
      CHECK(t == doctest::Approx(1.0 - std::pow(2.0 / 3.0, D)).epsilon(1e-12));
    }
  }

  TEST_CASE("cantor membership") {
    CHECK(ClosedSet::cantor_contains_unit(Rational(1, 4)));
    CHECK_FALSE(ClosedSet::cantor_contains_unit(Rational(1, 2)));
    CHECK(ClosedSet::cantor_contains_unit(Rational(1, 3)));
    CHECK(ClosedSet::cantor_contains_unit(Rational(3, 4)));
    CHECK_FALSE(ClosedSet::cantor_contains_unit(Rational(5, 9)));
    const auto C = ClosedSet::cantor({0.0, 1.0});
    CHECK(C.contains(0.25));
    CHECK_FALSE(C.contains(0.5));
  }

  TEST_CASE("cantor blocks") {
    const auto C = ClosedSet::cantor({0.0, 1.0});
    for (int n = 1; n <= 4; ++n) {
      const int count = 1 << n;
      for (int i = 1; i <= count; ++i) {
        const Interval b = C.cantor_block(n, i);
        CHECK(b.length() == doctest::Approx(std::pow(3.0, -n)));
        CHECK(C.contains(b.lo));
        CHECK(C.contains(b.hi));
        if (i > 1) CHECK(C.cantor_block(n, i - 1).hi < b.lo);
      }
    }
  }

  TEST_CASE("enumeration grows with depth") {
    const auto S = ClosedSet::sequence({"dyadic", 2, 1.0, 0.0}, 8);
    std::size_t prev = 0;
    for (int D = 1; D <= 12; ++D) {
      const auto pts = S.points(D);
      CHECK(pts.size() >= prev);
      prev = pts.size();
      for (double p : pts) CHECK(S.contains(p));
    }
    CHECK(S.contains(0.0));
  }

  TEST_CASE("disjoint contiguous intervals with member endpoints") {
    const auto U = ClosedSet::set_union({ClosedSet::cantor({0.0, 1.0}), ClosedSet::finite({2.0, 3.0})});
    const auto r = U.contiguous_intervals(5);
    for (std::size_t j = 0; j < r.intervals.size(); ++j) {
      CHECK(r.intervals[j].lo < r.intervals[j].hi);
      CHECK(U.contains(r.intervals[j].lo));
      CHECK(U.contains(r.intervals[j].hi));
      if (j > 0) CHECK(r.intervals[j - 1].hi <= r.intervals[j].lo);
    }
  }

  TEST_CASE("json round trip") {
    const auto C = ClosedSet::cantor({0.0, 2.0}, 5);
    const auto back = ClosedSet::from_json(C.to_json());
    CHECK(back.kind() == ClosedSet::Kind::cantor);
    CHECK(back.cover_length(5) == doctest::Approx(C.cover_length(5)));
  }
}
