#include "mtrack/bernstein.hpp"
#include "mtrack/rng.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

using namespace mtrack;

namespace {

ScalarCurve random_scalar(Rng& rng, int degree, double horizon, double amp = 2.0) {
  std::vector<double> c(degree + 1);
  for (double& x : c) x = rng.uniform(-amp, amp);
  return ScalarCurve(std::span<const double>(c), horizon);
}

PlanarCurve random_planar(Rng& rng, int degree, double horizon, double amp = 2.0) {
  std::vector<Vec2> c(degree + 1);
  for (Vec2& p : c) p = {rng.uniform(-amp, amp), rng.uniform(-amp, amp)};
  return PlanarCurve(std::span<const Vec2>(c), horizon);
}

}  // namespace

TEST_CASE("evaluate: constant and linear curves") {
  const PlanarCurve c = PlanarCurve::constant({1.0, 2.0}, 3.0, 2);
  CHECK(c.evaluate(0.0) == Vec2(1.0, 2.0));
  CHECK(c.evaluate(1.7) == Vec2(1.0, 2.0));
  CHECK(c.evaluate(3.0) == Vec2(1.0, 2.0));

  const PlanarCurve line({Vec2(0, 0), Vec2(1, 0)}, 1.0);
  CHECK(line.evaluate(0.5).x() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(line.evaluate(0.5).y() == 0.0);

  CHECK_THROWS_AS(line.evaluate(-0.01), std::domain_error);
  CHECK_THROWS_AS(line.evaluate(1.01), std::domain_error);
}

TEST_CASE("evaluate matches monomial-basis Horner evaluation") {
  Rng rng(42);
  for (int rep = 0; rep < 20; ++rep) {
    const ScalarCurve c = random_scalar(rng, 3, rng.uniform(0.5, 3.0));
    for (int i = 0; i < 100; ++i) {
      const double t = rng.uniform(0.0, c.horizon());
      const double got = c.evaluate(t);
      const double want = oracle::eval_monomial(c, t);
      CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("endpoint interpolation is exact") {
  Rng rng(7);
  for (int rep = 0; rep < 200; ++rep) {
    const int deg = rng.uniform_int(0, 8);
    const ScalarCurve c = random_scalar(rng, deg, rng.uniform(0.1, 5.0));
    CHECK(std::abs(c.evaluate(0.0) - c.front()) <= 1e-14);
    CHECK(std::abs(c.evaluate(c.horizon()) - c.back()) <= 1e-14);
  }
}

TEST_CASE("derivative: slope of a line and zero constant") {
  const ScalarCurve line({0.0, 1.0}, 2.0);
  const ScalarCurve d = line.derivative();
  CHECK(d.degree() == 0);
  CHECK(d.point(0) == doctest::Approx(0.5));

  const ScalarCurve flat = ScalarCurve::constant(4.0, 1.0);
  const ScalarCurve dd = flat.derivative();
  CHECK(dd.degree() == 0);
  CHECK(dd.point(0) == 0.0);
}

TEST_CASE("derivative matches central finite differences") {
  Rng rng(11);
  const ScalarCurve c = random_scalar(rng, 5, 2.0);
  const ScalarCurve d = c.derivative();
  const double h = 1e-6;
  for (int i = 0; i < 50; ++i) {
    const double t = rng.uniform(2 * h, c.horizon() - 2 * h);
    const double fd = (c.evaluate(t + h) - c.evaluate(t - h)) / (2 * h);
    CHECK(d.evaluate(t) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("product: t*t, identity, and evaluation oracle") {
  const ScalarCurve t({0.0, 1.0}, 1.0);
  const ScalarCurve t2 = product(t, t);
  REQUIRE(t2.degree() == 2);
  CHECK(t2.point(0) == doctest::Approx(0.0));
  CHECK(t2.point(1) == doctest::Approx(0.0));
  CHECK(t2.point(2) == doctest::Approx(1.0));

  Rng rng(5);
  const ScalarCurve c = random_scalar(rng, 4, 1.0);
  const ScalarCurve one = ScalarCurve::constant(1.0, 1.0);
  const ScalarCurve same = product(c, one);
  CHECK(same.degree() == c.degree());
  for (int k = 0; k <= c.degree(); ++k) CHECK(same.point(k) == doctest::Approx(c.point(k)));

  for (int rep = 0; rep < 10; ++rep) {
    const ScalarCurve a = random_scalar(rng, 3, 1.5);
    const ScalarCurve b = random_scalar(rng, 4, 1.5);
    const ScalarCurve ab = product(a, b);
    for (int i = 0; i < 100; ++i) {
      const double tt = rng.uniform(0.0, 1.5);
      const double want = a.evaluate(tt) * b.evaluate(tt);
      CHECK(ab.evaluate(tt) == doctest::Approx(want).epsilon(1e-10));
    }
  }

  const ScalarCurve other({0.0, 1.0}, 2.0);
  CHECK_THROWS_AS(product(t, other), std::invalid_argument);
}

TEST_CASE("dot product of planar curves") {
  Rng rng(17);
  const PlanarCurve a = random_planar(rng, 3, 1.0);
  const PlanarCurve b = random_planar(rng, 2, 1.0);
  const ScalarCurve ab = dot(a, b);
  for (int i = 0; i < 50; ++i) {
    const double t = rng.uniform(0.0, 1.0);
    CHECK(ab.evaluate(t) == doctest::Approx(a.evaluate(t).dot(b.evaluate(t))).epsilon(1e-10));
  }
}

TEST_CASE("definite integral: constants, ramp, quadrature oracle") {
  CHECK(definite_integral(ScalarCurve::constant(3.0, 2.0)) == doctest::Approx(6.0));
  CHECK(definite_integral(ScalarCurve({0.0, 1.0}, 1.0)) == doctest::Approx(0.5));

  Rng rng(23);
  for (int rep = 0; rep < 10; ++rep) {
    const ScalarCurve c = random_scalar(rng, 6, rng.uniform(0.5, 2.5));
    const double want = oracle::quadrature([&](double t) { return c.evaluate(t); }, 0.0,
                                           c.horizon());
    CHECK(definite_integral(c) == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("split: line, identity, random cubic evaluation oracle") {
  const ScalarCurve line({0.0, 1.0}, 1.0);
  const auto pieces = line.split(std::array<double, 1>{0.5});
  REQUIRE(pieces.size() == 2);
  CHECK(pieces[0].front() == doctest::Approx(0.0));
  CHECK(pieces[0].back() == doctest::Approx(0.5));
  CHECK(pieces[1].front() == doctest::Approx(0.5));
  CHECK(pieces[1].back() == doctest::Approx(1.0));
  CHECK(pieces[0].horizon() == doctest::Approx(0.5));

  const auto whole = line.split(std::span<const double>{});
  REQUIRE(whole.size() == 1);
  CHECK(whole[0].back() == doctest::Approx(1.0));

  Rng rng(31);
  for (int rep = 0; rep < 10; ++rep) {
    const double T = rng.uniform(0.5, 3.0);
    const PlanarCurve c = random_planar(rng, 3, T);
    const std::array<double, 2> cuts{0.3 * T, 0.7 * T};
    const auto parts = c.split(cuts);
    REQUIRE(parts.size() == 3);
    const double starts[3] = {0.0, 0.3 * T, 0.7 * T};
    for (int p = 0; p < 3; ++p) {
      for (int i = 0; i <= 50; ++i) {
        const double local = parts[p].horizon() * (i / 50.0);
        const Vec2 got = parts[p].evaluate(local);
        const Vec2 want = c.evaluate(std::min(starts[p] + local, T));
        CHECK((got - want).norm() <= 1e-12);
      }
    }
  }

  CHECK_THROWS_AS(line.split(std::array<double, 2>{0.7, 0.3}), std::invalid_argument);
  CHECK_THROWS_AS(line.split(std::array<double, 1>{1.5}), std::invalid_argument);
}

TEST_CASE("coefficient nonnegativity certificate") {
  CHECK(coefficients_nonnegative(ScalarCurve({0.0, 0.2, 1.0}, 1.0)));
  // Sufficient only: may reject pointwise-positive polynomials.
  CHECK_FALSE(coefficients_nonnegative(ScalarCurve({1.0, -0.1, 1.0}, 1.0)));

  Rng rng(47);
  int certified = 0;
  while (certified < 1000) {
    const ScalarCurve c = random_scalar(rng, rng.uniform_int(2, 6), 1.0);
    if (!coefficients_nonnegative(c)) continue;
    ++certified;
    for (int i = 0; i <= 1000; ++i) {
      const double v = c.evaluate(i / 1000.0);
      REQUIRE(v >= -1e-12);
    }
  }
}

TEST_CASE("convex hull property: samples stay within control point range") {
  Rng rng(53);
  for (int rep = 0; rep < 50; ++rep) {
    const ScalarCurve c = random_scalar(rng, rng.uniform_int(1, 8), rng.uniform(0.5, 2.0));
    const double lo = min_coefficient(c);
    const double hi = max_coefficient(c);
    for (int i = 0; i < 100; ++i) {
      const double v = c.evaluate(rng.uniform(0.0, c.horizon()));
      CHECK(v >= lo - 1e-12);
      CHECK(v <= hi + 1e-12);
    }
  }
}

TEST_CASE("derivative of the antiderivative recovers the curve") {
  Rng rng(59);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = rng.uniform_int(1, 6);
    const ScalarCurve c = random_scalar(rng, n, rng.uniform(0.5, 2.0));
    // Antiderivative in Bernstein form: running scaled prefix sums.
    std::vector<double> anti(n + 2, 0.0);
    for (int k = 0; k <= n; ++k) {
      anti[k + 1] = anti[k] + c.horizon() / (n + 1) * c.point(k);
    }
    const ScalarCurve a(std::span<const double>(anti), c.horizon());
    const ScalarCurve back = a.derivative();
    for (int i = 0; i <= 20; ++i) {
      const double t = c.horizon() * (i / 20.0);
      CHECK(back.evaluate(t) == doctest::Approx(c.evaluate(t)).epsilon(1e-10));
    }
  }
}

TEST_CASE("degree elevation commutes with evaluation") {
  Rng rng(61);
  for (int rep = 0; rep < 20; ++rep) {
    const ScalarCurve c = random_scalar(rng, 3, 1.0);
    const ScalarCurve e = c.elevated(rng.uniform_int(4, 12));
    for (int i = 0; i < 50; ++i) {
      const double t = rng.uniform(0.0, 1.0);
      CHECK(e.evaluate(t) == doctest::Approx(c.evaluate(t)).epsilon(1e-10));
    }
  }
}

TEST_CASE("constructor contracts") {
  CHECK_THROWS_AS(ScalarCurve({1.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ScalarCurve({1.0}, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(ScalarCurve(std::span<const double>{}, 1.0), std::invalid_argument);
  const std::vector<double> too_many(40, 0.0);
  CHECK_THROWS_AS(ScalarCurve(std::span<const double>(too_many), 1.0), std::invalid_argument);
}
