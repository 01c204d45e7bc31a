#include "fracfem/element_quad.hpp"

#include <cmath>

#include "fracfem/quadrature.hpp"

namespace fracfem {

std::array<double, 3> barycentric(const SimplicialMesh& mesh, int e, const Vec2& p) {
  const Vec2 p0 = mesh.vertex(e, 0);
  if (mesh.dim == 1) {
    const double t = (p[0] - p0[0]) / (mesh.vertex(e, 1)[0] - p0[0]);
    return {1.0 - t, t, 0.0};
  }
  const Vec2 c1 = mesh.vertex(e, 1) - p0, c2 = mesh.vertex(e, 2) - p0, r = p - p0;
  const double det = cross(c1, c2);
  const double l1 = cross(r, c2) / det;
  const double l2 = cross(c1, r) / det;
  return {1.0 - l1 - l2, l1, l2};
}

double integrate_element(const SimplicialMesh& mesh, int e,
                         const std::function<double(const Vec2&)>& f, int degree) {
  if (mesh.dim == 1) {
    const double a = mesh.vertex(e, 0)[0], b = mesh.vertex(e, 1)[0];
    return integrate_interval([&](double x) { return f({x, 0.0}); }, std::min(a, b),
                              std::max(a, b), std::max(1, degree));
  }
  return integrate_triangle(f, mesh.vertex(e, 0), mesh.vertex(e, 1), mesh.vertex(e, 2), degree);
}

namespace {

double graded_2d(const Domain& dom, const Vec2& p0, const Vec2& p1, const Vec2& p2,
                 const std::function<double(const Vec2&)>& f, int degree, int depth,
                 int split_budget) {
  const Vec2 v[3] = {p0, p1, p2};
  const double diam = std::max({dist(p0, p1), dist(p1, p2), dist(p2, p0)});
  const double tol = 1e-11 * diam;
  bool bv[3];
  for (int i = 0; i < 3; ++i) bv[i] = dom.boundary_distance(v[i]) < tol;
  bool be[3];  // edge i = (v[i], v[(i+1)%3])
  int n_be = 0, n_bv = 0;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    be[i] = bv[i] && bv[j] && dom.boundary_distance(0.5 * (v[i] + v[j])) < tol;
    n_be += be[i];
    n_bv += bv[i];
  }
  if (n_be == 0 && n_bv == 0) return integrate_triangle(f, p0, p1, p2, degree);

  auto red_split = [&](auto&& handle_child) {
    const Vec2 m[3] = {0.5 * (v[0] + v[1]), 0.5 * (v[1] + v[2]), 0.5 * (v[2] + v[0])};
    double sum = handle_child(v[0], m[0], m[2]);
    sum += handle_child(m[0], v[1], m[1]);
    sum += handle_child(m[2], m[1], v[2]);
    sum += handle_child(m[0], m[1], m[2]);
    return sum;
  };

  if (n_be == 0) {
    // isolated boundary vertices: cut off each boundary corner and grade toward it
    return red_split([&](const Vec2& a, const Vec2& b, const Vec2& c) {
      for (int i = 0; i < 3; ++i)
        if (bv[i] && a == v[i])
          return integrate_triangle_graded_vertex(f, a, b, c, depth, degree);
      return integrate_triangle(f, a, b, c, degree);
    });
  }
  if (n_be == 1) {
    int i = 0;
    while (!be[i]) ++i;
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    if (bv[k] && split_budget > 0)  // apex also touches the boundary: split first
      return red_split([&](const Vec2& a, const Vec2& b, const Vec2& c) {
        return graded_2d(dom, a, b, c, f, degree, depth, split_budget - 1);
      });
    return integrate_triangle_graded_edge(f, v[i], v[j], v[k], depth, degree);
  }
  if (n_be == 2) {
    // corner element: split at the midpoint of the interior edge
    int i = 0;
    while (be[i]) ++i;      // i = interior edge index
    const int c = (i + 2) % 3;  // corner shared by both boundary edges
    const Vec2 m = 0.5 * (v[i] + v[(i + 1) % 3]);
    return integrate_triangle_graded_edge(f, v[c], v[i], m, depth, degree) +
           integrate_triangle_graded_edge(f, v[c], v[(i + 1) % 3], m, depth, degree);
  }
  // all three edges on the boundary (single-element mesh of a triangle domain)
  const Vec2 g = (1.0 / 3.0) * (v[0] + v[1] + v[2]);
  double sum = 0.0;
  for (int i = 0; i < 3; ++i)
    sum += integrate_triangle_graded_edge(f, v[i], v[(i + 1) % 3], g, depth, degree);
  return sum;
}

}  // namespace

double integrate_element_graded(const SimplicialMesh& mesh, int e,
                                const std::function<double(const Vec2&)>& f, int degree,
                                int depth) {
  if (mesh.dim == 1) {
    const double x0 = mesh.vertex(e, 0)[0], x1 = mesh.vertex(e, 1)[0];
    const double lo = std::min(x0, x1), hi = std::max(x0, x1);
    const double tol = 1e-11 * (hi - lo);
    const bool at_a = std::abs(lo - mesh.domain.a) < tol;
    const bool at_b = std::abs(hi - mesh.domain.b) < tol;
    auto g = [&](double x) { return f({x, 0.0}); };
    const int k = std::max(1, degree);
    if (at_a && at_b) {
      const double mid = 0.5 * (lo + hi);
      return integrate_interval_graded(g, lo, mid, lo, depth, k) +
             integrate_interval_graded(g, mid, hi, hi, depth, k);
    }
    if (at_a) return integrate_interval_graded(g, lo, hi, lo, depth, k);
    if (at_b) return integrate_interval_graded(g, lo, hi, hi, depth, k);
    return integrate_interval(g, lo, hi, k);
  }
  return graded_2d(mesh.domain, mesh.vertex(e, 0), mesh.vertex(e, 1), mesh.vertex(e, 2), f,
                   degree, depth, 2);
}

}  // namespace fracfem
