#include <doctest.h>

#include <cmath>

#include "fracfem/quadrature.hpp"

using namespace fracfem;

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2k-1 exactly") {
  for (int k = 1; k <= 12; ++k) {
    const auto& pts = gauss_legendre(k);
    REQUIRE(int(pts.size()) == k);
    double wsum = 0;
    for (const auto& q : pts) wsum += q.w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
    const int d = 2 * k - 1;
    double val = 0;
    for (const auto& q : pts) val += q.w * std::pow(q.x, d);
    CHECK(val == doctest::Approx(1.0 / (d + 1)).epsilon(1e-13));
  }
}

TEST_CASE("triangle rules integrate monomials up to the stated degree") {
  // reference triangle (0,0)-(1,0)-(0,1): int x^a y^b = a! b! / (a+b+2)!
  auto exact = [](int a, int b) {
    double v = 1.0;
    for (int k = 1; k <= a; ++k) v *= k;
    for (int k = 1; k <= b; ++k) v *= k;
    for (int k = 1; k <= a + b + 2; ++k) v /= k;
    return v;
  };
  for (int deg = 1; deg <= 10; ++deg) {
    for (int a = 0; a <= deg; ++a)
      for (int b = 0; a + b <= deg; ++b) {
        const double got = integrate_triangle(
            [&](const Vec2& p) { return std::pow(p[0], a) * std::pow(p[1], b); }, {0, 0}, {1, 0},
            {0, 1}, deg);
        CHECK(got == doctest::Approx(exact(a, b)).epsilon(1e-12));
      }
  }
}

TEST_CASE("graded interval subdivision resolves endpoint singularities") {
  // the subdivision drops the last sliver (relative size 2^-depth), so the
  // depth must be deep enough for the target accuracy
  // int_0^1 x^-1/2 = 2, singular at the left end; dropped mass 2 * 2^{-depth/2}
  const double v = integrate_interval_graded([](double x) { return 1.0 / std::sqrt(x); }, 0.0,
                                             1.0, 0.0, 80, 8);
  CHECK(v == doctest::Approx(2.0).epsilon(1e-10));
  // int_0^1 (1-x)^-1/2 = 2, singular at the right end; dropped mass 2 * 2^{-depth/2}
  const double w = integrate_interval_graded(
      [](double x) { return 1.0 / std::sqrt(1.0 - x); }, 0.0, 1.0, 1.0, 50, 8);
  CHECK(w == doctest::Approx(2.0).epsilon(1e-7));
  // a stronger singularity at a nonzero endpoint: cells collapse onto x=1 once
  // their width underflows (~level 52), so the value stays finite but the
  // remaining mass 10 * 2^{-52/10} caps the accuracy at a few percent
  const double w9 = integrate_interval_graded([](double x) { return std::pow(1.0 - x, -0.9); },
                                              0.0, 1.0, 1.0, 400, 8);
  CHECK(std::isfinite(w9));
  CHECK(w9 == doctest::Approx(10.0).epsilon(0.04));
  // non-singular integrand: matches the plain value up to the dropped sliver
  const double p = integrate_interval_graded([](double x) { return std::cos(x); }, 0.0, 1.0, 0.0,
                                             40, 8);
  CHECK(p == doctest::Approx(std::sin(1.0)).epsilon(1e-11));
}

TEST_CASE("vertex-graded triangle integration: (x+y)^-3/2 over the reference triangle") {
  // polar around the origin: int_T (x+y)^{-3/2} dA
  //   = int_0^{pi/2} (cos t + sin t)^{-3/2} int_0^{R(t)} r^{-1/2} dr dt with
  //   R(t) = 1/(cos t + sin t), which collapses to 2 int_0^{pi/2} (cos+sin)^{-2} = 2.
  const double v = integrate_triangle_graded_vertex(
      [](const Vec2& p) { return std::pow(p[0] + p[1], -1.5); }, {0, 0}, {1, 0}, {0, 1}, 80, 10);
  CHECK(v == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("edge-graded triangle integration: y^-1/2 over the reference triangle") {
  // int_0^1 (1-y) y^-1/2 dy = 2 - 2/3 = 4/3, singular on the edge y=0
  const double v = integrate_triangle_graded_edge(
      [](const Vec2& p) { return 1.0 / std::sqrt(p[1]); }, {0, 0}, {1, 0}, {0, 1}, 80, 10);
  CHECK(v == doctest::Approx(4.0 / 3.0).epsilon(1e-7));
}
