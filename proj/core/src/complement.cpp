#include "fracfem/complement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracfem/element_quad.hpp"
#include "fracfem/kernel.hpp"
#include "fracfem/quadrature.hpp"

namespace fracfem {

namespace {

// \int_lo^hi f dt where f peaks near t0 at length scale `scale`: geometric
// cells toward t0 on each side, every cell (including the innermost) by Gauss.
double peaked_interval(const std::function<double(double)>& f, double lo, double hi, double t0,
                       double scale, int k) {
  double sum = 0.0;
  for (int side = 0; side < 2; ++side) {
    const double end = side == 0 ? lo : hi;
    const double len = std::abs(t0 - end);
    if (len == 0.0) continue;
    int depth = 0;
    while (len * std::pow(0.5, depth + 1) > 0.25 * scale && depth < 60) ++depth;
    double t = 1.0;
    for (int level = 0; level <= depth; ++level) {
      const double inner = level == depth ? 0.0 : 0.5 * t;
      const double c0 = t0 + (end - t0) * inner, c1 = t0 + (end - t0) * t;
      sum += integrate_interval(f, std::min(c0, c1), std::max(c0, c1), k);
      t = inner;
    }
  }
  return sum;
}

}  // namespace

double complement_weight(const Vec2& x, const Domain& domain, double s) {
  require_fractional_order(s);
  if (domain.dim == 1) {
    if (!(x[0] > domain.a && x[0] < domain.b))
      throw std::invalid_argument("complement_weight: point must lie strictly inside the domain");
    return (std::pow(x[0] - domain.a, -2.0 * s) + std::pow(domain.b - x[0], -2.0 * s)) /
           (2.0 * s);
  }
  if (!point_in_polygon(x, domain.polygon) || domain.boundary_distance(x) <= 0.0)
    throw std::invalid_argument("complement_weight: point must lie strictly inside the domain");
  // omega(x) = (1/2s) sum_edges d_e \int_edge |y-x|^{-2-2s} dl with d_e the
  // (constant) outward-normal component of y-x on the edge
  double total = 0.0;
  const auto& poly = domain.polygon;
  const int m = static_cast<int>(poly.size());
  for (int i = 0; i < m; ++i) {
    const Vec2 p = poly[i], q = poly[(i + 1) % m];
    const Vec2 t = q - p;
    const double len = norm(t);
    const Vec2 n_out{t[1] / len, -t[0] / len};  // CCW polygon
    const double d_e = dot(p - x, n_out);
    if (d_e == 0.0) continue;
    const double t0 = std::clamp(dot(x - p, t) / (len * len), 0.0, 1.0);
    const double dline = dist(x, p + t0 * t);
    auto f = [&](double u) {
      const Vec2 y = p + u * t;
      const double r2 = dot(y - x, y - x);
      return len * std::pow(r2, -1.0 - s);
    };
    total += d_e * peaked_interval(f, 0.0, 1.0, t0, dline / len, 8);
  }
  return total / (2.0 * s);
}

LocalComplementMatrix complement_element_matrix(const SimplicialMesh& mesh, int e, double s,
                                                int order) {
  LocalComplementMatrix out{};
  const int nv = mesh.n_vertices_per_elem();
  bool active[3] = {false, false, false};
  bool any = false;
  for (int a = 0; a < nv; ++a) {
    active[a] = !mesh.boundary_vertex[mesh.elements[e][a]];
    any = any || active[a];
  }
  if (!any) return out;
  const bool near_boundary = mesh.elem_boundary_dist[e] < 2.0 * mesh.elem_diameter[e];
  for (int a = 0; a < nv; ++a)
    for (int b = a; b < nv; ++b) {
      if (!active[a] || !active[b]) continue;
      auto f = [&](const Vec2& x) {
        const auto lam = barycentric(mesh, e, x);
        return lam[a] * lam[b] * complement_weight(x, mesh.domain, s);
      };
      const double val = near_boundary ? integrate_element_graded(mesh, e, f, order)
                                       : integrate_element(mesh, e, f, order);
      out[a][b] = val;
      out[b][a] = val;
    }
  return out;
}

double complement_mass_entry(const SimplicialMesh& mesh, int vi, int vj, double s, int order) {
  if (mesh.boundary_vertex[vi] || mesh.boundary_vertex[vj]) return 0.0;
  double sum = 0.0;
  const int nv = mesh.n_vertices_per_elem();
  for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
    int li = -1, lj = -1;
    for (int a = 0; a < nv; ++a) {
      if (mesh.elements[e][a] == vi) li = a;
      if (mesh.elements[e][a] == vj) lj = a;
    }
    if (li < 0 || lj < 0) continue;
    sum += complement_element_matrix(mesh, static_cast<int>(e), s, order)[li][lj];
  }
  return sum;
}

}  // namespace fracfem
