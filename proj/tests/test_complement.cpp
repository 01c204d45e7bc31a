#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fracfem/complement.hpp"
#include "fracfem/quadrature.hpp"

using namespace fracfem;

namespace {

// exact 1D weight on (a,b): int_{y<a} + int_{y>b} |x-y|^{-1-2s} dy
double omega_1d(double x, double a, double b, double s) {
  return (std::pow(x - a, -2 * s) + std::pow(b - x, -2 * s)) / (2 * s);
}

// polar oracle for a convex polygon: omega(x) = (1/2s) oint rho(theta)^{-2s},
// rho the ray distance from x to the boundary. Panels split at corner angles.
double omega_polar(const Vec2& x, const std::vector<Vec2>& poly, double s) {
  const int m = int(poly.size());
  std::vector<double> angles;
  for (const auto& p : poly) angles.push_back(std::atan2(p[1] - x[1], p[0] - x[0]));
  std::sort(angles.begin(), angles.end());
  angles.push_back(angles.front() + 2 * M_PI);
  auto rho = [&](double th) {
    const Vec2 d{std::cos(th), std::sin(th)};
    double best = 1e300;
    for (int k = 0; k < m; ++k) {
      const Vec2 p = poly[k], q = poly[(k + 1) % m];
      const Vec2 e = q - p;
      const double den = cross(d, e);
      if (std::abs(den) < 1e-15) continue;
      const double t = cross(p - x, e) / den;        // along the ray
      const double u = cross(p - x, d) / den;        // along the edge
      if (t > 0 && u >= -1e-12 && u <= 1 + 1e-12) best = std::min(best, t);
    }
    return best;
  };
  double acc = 0;
  for (std::size_t k = 0; k + 1 < angles.size(); ++k) {
    const double lo = angles[k], hi = angles[k + 1];
    if (hi - lo < 1e-14) continue;
    acc += integrate_interval([&](double th) { return std::pow(rho(th), -2 * s); }, lo, hi, 32);
  }
  return acc / (2 * s);
}

}  // namespace

TEST_CASE("1D complement weight matches the antiderivative") {
  for (const double s : {0.2, 0.5, 0.8}) {
    for (const double x : {-0.9, -0.3, 0.0, 0.5, 0.99})
      CHECK(complement_weight({x, 0}, Domain::interval(-1, 1), s) ==
            doctest::Approx(omega_1d(x, -1, 1, s)).epsilon(1e-12));
    CHECK(complement_weight({1.2, 0}, Domain::interval(0.5, 3.0), s) ==
          doctest::Approx(omega_1d(1.2, 0.5, 3.0, s)).epsilon(1e-12));
  }
}

TEST_CASE("2D complement weight on the unit square matches the polar oracle") {
  const auto dom = Domain::unit_square();
  const Vec2 pts[] = {{0.5, 0.5}, {0.3, 0.7}, {0.1, 0.1}, {0.85, 0.4}};
  for (const double s : {0.25, 0.5, 0.75})
    for (const auto& x : pts)
      CHECK(complement_weight(x, dom, s) ==
            doctest::Approx(omega_polar(x, dom.polygon, s)).epsilon(1e-6));
}

TEST_CASE("complement weight is symmetric and blows up toward the boundary") {
  const auto dom = Domain::unit_square();
  const double s = 0.5;
  CHECK(complement_weight({0.3, 0.6}, dom, s) ==
        doctest::Approx(complement_weight({0.7, 0.4}, dom, s)).epsilon(1e-10));
  double prev = 0;
  for (const double x : {0.5, 0.3, 0.1, 0.03, 0.01}) {
    const double w = complement_weight({x, 0.5}, dom, s);
    CHECK(w > prev);
    prev = w;
  }
  CHECK(prev > complement_weight({0.5, 0.5}, dom, s) * 10);
}

TEST_CASE("element complement matrix: boundary rows vanish, interior entries match quadrature") {
  const auto m = build_quasi_uniform(Domain::unit_square(), 0.25);
  const double s = 0.4;
  for (int e = 0; e < int(m.n_elements()); ++e) {
    const auto loc = complement_element_matrix(m, e, s);
    bool all_interior = true;
    for (int a = 0; a < 3; ++a) {
      if (!m.boundary_vertex[m.elements[e][a]]) continue;
      all_interior = false;
      for (int b = 0; b < 3; ++b) {
        CHECK(loc[a][b] == 0.0);
        CHECK(loc[b][a] == 0.0);
      }
    }
    if (!all_interior || m.elem_boundary_dist[e] < 0.2) continue;
    // far from the boundary omega is smooth; compare one entry against a
    // direct high-order quadrature
    const Vec2 p0 = m.vertex(e, 0), p1 = m.vertex(e, 1), p2 = m.vertex(e, 2);
    const double oracle = integrate_triangle(
        [&](const Vec2& x) {
          // lambda_0 lambda_1 via the affine map
          const double det = cross(p1 - p0, p2 - p0);
          const double l1 = cross(x - p0, p2 - p0) / det;
          const double l2 = cross(p1 - p0, x - p0) / det;
          return (1 - l1 - l2) * l1 * complement_weight(x, m.domain, s);
        },
        p0, p1, p2, 12);
    CHECK(loc[0][1] == doctest::Approx(oracle).epsilon(1e-8));
  }
}

TEST_CASE("1D complement mass entries match a dyadically refined oracle") {
  const auto m = build_quasi_uniform(Domain::interval(-1, 1), 0.25);
  const double s = 0.5;
  auto hat = [&](int v, double x) {
    const double xv = m.vertices[v][0];
    return std::max(0.0, 1.0 - std::abs(x - xv) / 0.25);
  };
  auto oracle = [&](int vi, int vj) {
    double acc = 0;
    for (int e = 0; e < int(m.n_elements()); ++e) {
      const double a = m.vertex(e, 0)[0], b = m.vertex(e, 1)[0];
      auto f = [&](double x) {
        return hat(vi, x) * hat(vj, x) * omega_1d(x, -1, 1, s);
      };
      // omega is singular only at the domain endpoints
      if (a <= -1 + 1e-14)
        acc += integrate_interval_graded(f, a, b, a, 45, 12);
      else if (b >= 1 - 1e-14)
        acc += integrate_interval_graded(f, a, b, b, 45, 12);
      else
        acc += integrate_interval(f, a, b, 12);
    }
    return acc;
  };
  // vertex 1 is next to the boundary (singular weight), vertex 4 is the center
  const std::pair<int, int> entries[] = {{1, 1}, {1, 2}, {4, 4}, {4, 5}, {3, 5}};
  for (const auto& [vi, vj] : entries)
    CHECK(complement_mass_entry(m, vi, vj, s) == doctest::Approx(oracle(vi, vj)).epsilon(1e-8));
  CHECK(complement_mass_entry(m, 0, 1, s) == 0.0);  // boundary vertex
}
