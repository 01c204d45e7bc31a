#include "fracfem/pair_rules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fracfem/kernel.hpp"
#include "fracfem/quadrature.hpp"

namespace fracfem {

namespace {

double det2(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }

double det3(const std::array<double, 3>& a, const std::array<double, 3>& b,
            const std::array<double, 3>& c) {
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
         a[2] * (b[0] * c[1] - b[1] * c[0]);
}

// ---- 1D -------------------------------------------------------------------

PairRule identical_1d(double a0, double a1, double s, int k) {
  PairRule rule{PairClass::identical, k, {}};
  const double h = std::abs(a1 - a0);
  // P1 differences satisfy f(x,y) = c (x-y)^2, so two symmetric points with
  // weight h^2 B(2-2s,2) reproduce \iint c|x-y|^{1-2s} exactly.
  const double w = h * h * beta_function(2.0 - 2.0 * s, 2.0);
  rule.points.push_back({{a1, 0.0}, {a0, 0.0}, w});
  rule.points.push_back({{a0, 0.0}, {a1, 0.0}, w});
  return rule;
}

PairRule shared_vertex_1d(double p, double q1, double q2, double s, int k) {
  PairRule rule{PairClass::shared_vertex, k, {}};
  const double e = q1 - p, ep = q2 - p;
  const double factor = std::abs(e) * std::abs(ep) / (3.0 - 2.0 * s);
  // scale out r = max(u,v); boundary pieces {u=1} and {v=1}, radial
  // \int_0^1 r^{2-2s} dr done analytically
  for (const auto& q : gauss_legendre(k)) {
    rule.points.push_back({{p + e, 0.0}, {p + ep * q.x, 0.0}, factor * q.w});
    rule.points.push_back({{p + e * q.x, 0.0}, {p + ep, 0.0}, factor * q.w});
  }
  return rule;
}

PairRule disjoint_1d(double a0, double a1, double b0, double b1, const QuadOrders& orders) {
  const double ha = std::abs(a1 - a0), hb = std::abs(b1 - b0);
  const double lo_a = std::min(a0, a1), hi_a = std::max(a0, a1);
  const double lo_b = std::min(b0, b1), hi_b = std::max(b0, b1);
  const double gap = std::max(0.0, std::max(lo_b - hi_a, lo_a - hi_b));
  const double ratio = gap / std::max(ha, hb);
  const int k = ratio > 3.0 ? orders.far : (ratio > 1.0 ? orders.near : orders.near + 2);
  PairRule rule{PairClass::disjoint, k, {}};
  const auto& gl = gauss_legendre(k);
  for (const auto& qa : gl)
    for (const auto& qb : gl)
      rule.points.push_back({{a0 + (a1 - a0) * qa.x, 0.0},
                             {b0 + (b1 - b0) * qb.x, 0.0},
                             ha * hb * qa.w * qb.w});
  return rule;
}

// ---- 2D -------------------------------------------------------------------

// T x T with z = x - y: the triangle covariogram in reference coordinates is
// (1-m)^2/2 with m(z) = max(0,z1)+max(0,z2)+max(0,-z1-z2); its level set
// {m=1} is a hexagon, and the integrand is (-2s)-homogeneous, so the radial
// factor is B(2-2s,3)/2 and only the hexagon boundary is sampled.
PairRule identical_2d(const std::array<Vec2, 3>& t, double s, int k) {
  PairRule rule{PairClass::identical, k, {}};
  const Vec2 p0 = t[0];
  const Vec2 c1 = t[1] - p0, c2 = t[2] - p0;  // columns of B
  const double J = std::abs(det2(c1, c2));
  const double radial = 0.5 * beta_function(2.0 - 2.0 * s, 3.0);
  static const double hex[6][2] = {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}};
  const auto& gl = gauss_legendre(k);
  for (int e = 0; e < 6; ++e) {
    const double* za = hex[e];
    const double* zb = hex[(e + 1) % 6];
    // |det[za, zb]| = 1 for every hexagon edge
    for (const auto& q : gl) {
      const double z1 = (1.0 - q.x) * za[0] + q.x * zb[0];
      const double z2 = (1.0 - q.x) * za[1] + q.x * zb[1];
      const double u1 = std::max(0.0, z1), u2 = std::max(0.0, z2);
      const Vec2 x = p0 + u1 * c1 + u2 * c2;
      const Vec2 y = p0 + (u1 - z1) * c1 + (u2 - z2) * c2;
      rule.points.push_back({x, y, J * J * radial * q.w});
    }
  }
  return rule;
}

// Shared edge (p0,p1): variables z = (w1, u2, v2) with w1 = u1 - v1; the fiber
// length is 1 - M(z) with M(z) = max(u2, v2-w1) + max(0, w1). The polytope
// {M=1, u2>=0, v2>=0} decomposes into six triangular facets; the radial factor
// is B(3-2s,2).
PairRule shared_edge_2d(const Vec2& p0, const Vec2& p1, const Vec2& a2, const Vec2& b2, double s,
                        int k) {
  PairRule rule{PairClass::shared_facet, k, {}};
  const Vec2 e = p1 - p0, d = a2 - p0, dp = b2 - p0;
  const double J = std::abs(det2(e, d)), Jp = std::abs(det2(e, dp));
  const double radial = beta_function(3.0 - 2.0 * s, 2.0);
  using Z = std::array<double, 3>;
  static const Z facets[6][3] = {
      {{{1, 0, 0}}, {{0, 1, 0}}, {{0, 1, 1}}},   {{{1, 0, 0}}, {{0, 1, 1}}, {{1, 0, 1}}},
      {{{0, 0, 1}}, {{1, 0, 1}}, {{0, 1, 1}}},   {{{0, 1, 0}}, {{-1, 1, 0}}, {{0, 1, 1}}},
      {{{-1, 0, 0}}, {{-1, 1, 0}}, {{0, 1, 1}}}, {{{-1, 0, 0}}, {{0, 1, 1}}, {{0, 0, 1}}}};
  const auto& tri = triangle_rule(k);
  for (const auto& f : facets) {
    const Z& A = f[0];
    const Z ab{f[1][0] - A[0], f[1][1] - A[1], f[1][2] - A[2]};
    const Z ac{f[2][0] - A[0], f[2][1] - A[1], f[2][2] - A[2]};
    const double vol6 = std::abs(det3(A, ab, ac));  // = 1 for each facet here
    for (const auto& q : tri) {
      const double w1 = A[0] + q.l1 * ab[0] + q.l2 * ac[0];
      const double u2 = A[1] + q.l1 * ab[1] + q.l2 * ac[1];
      const double v2 = A[2] + q.l1 * ab[2] + q.l2 * ac[2];
      const double u1 = std::max(0.0, w1), v1 = std::max(0.0, -w1);
      const Vec2 x = p0 + u1 * e + u2 * d;
      const Vec2 y = p0 + v1 * e + v2 * dp;
      rule.points.push_back({x, y, J * Jp * radial * vol6 * 0.5 * q.w});
    }
  }
  return rule;
}

// Shared vertex p0: scale out r = max(u1+u2, v1+v2) on the product of
// reference triangles; radial factor 1/(4-2s), boundary pieces are
// (edge of one triangle) x (other full triangle).
PairRule shared_vertex_2d(const Vec2& p0, const Vec2& a1, const Vec2& a2, const Vec2& b1,
                          const Vec2& b2, double s, int k) {
  PairRule rule{PairClass::shared_vertex, k, {}};
  const Vec2 c1 = a1 - p0, c2 = a2 - p0, d1 = b1 - p0, d2 = b2 - p0;
  const double J = std::abs(det2(c1, c2)), Jp = std::abs(det2(d1, d2));
  const double factor = J * Jp / (4.0 - 2.0 * s);
  const auto& gl = gauss_legendre(k);
  const auto& tri = triangle_rule(k);
  for (const auto& q : gl)
    for (const auto& p : tri) {
      const double w = factor * q.w * 0.5 * p.w;
      // u on its diagonal edge, v anywhere in the other triangle — and the swap
      rule.points.push_back(
          {p0 + q.x * c1 + (1.0 - q.x) * c2, p0 + p.l1 * d1 + p.l2 * d2, w});
      rule.points.push_back(
          {p0 + p.l1 * c1 + p.l2 * c2, p0 + q.x * d1 + (1.0 - q.x) * d2, w});
    }
  return rule;
}

double triangle_distance(const std::array<Vec2, 3>& t1, const std::array<Vec2, 3>& t2) {
  double d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      d = std::min(d, point_segment_distance(t1[i], t2[j], t2[(j + 1) % 3]));
      d = std::min(d, point_segment_distance(t2[i], t1[j], t1[(j + 1) % 3]));
    }
  return d;
}

PairRule disjoint_2d(const std::array<Vec2, 3>& t1, const std::array<Vec2, 3>& t2,
                     const QuadOrders& orders) {
  const double d1 = std::max({dist(t1[0], t1[1]), dist(t1[1], t1[2]), dist(t1[2], t1[0])});
  const double d2 = std::max({dist(t2[0], t2[1]), dist(t2[1], t2[2]), dist(t2[2], t2[0])});
  const double ratio = triangle_distance(t1, t2) / std::max(d1, d2);
  const int deg =
      ratio > 3.0 ? orders.far - 1 : (ratio > 1.0 ? orders.near - 1 : 2 * orders.near - 1);
  PairRule rule{PairClass::disjoint, deg, {}};
  const double area1 = 0.5 * std::abs(det2(t1[1] - t1[0], t1[2] - t1[0]));
  const double area2 = 0.5 * std::abs(det2(t2[1] - t2[0], t2[2] - t2[0]));
  const auto& tri = triangle_rule(deg);
  for (const auto& qa : tri)
    for (const auto& qb : tri) {
      const Vec2 x = (1.0 - qa.l1 - qa.l2) * t1[0] + qa.l1 * t1[1] + qa.l2 * t1[2];
      const Vec2 y = (1.0 - qb.l1 - qb.l2) * t2[0] + qb.l1 * t2[1] + qb.l2 * t2[2];
      rule.points.push_back({x, y, area1 * area2 * qa.w * qb.w});
    }
  return rule;
}

}  // namespace

PairRule pair_rule_1d(double a0, double a1, double b0, double b1, double s,
                      const QuadOrders& orders) {
  require_fractional_order(s);
  if ((a0 == b0 && a1 == b1) || (a0 == b1 && a1 == b0))
    return identical_1d(a0, a1, s, orders.singular);
  for (double p : {a0, a1})
    for (double q : {b0, b1})
      if (p == q) return shared_vertex_1d(p, a0 + a1 - p, b0 + b1 - p, s, orders.singular);
  return disjoint_1d(a0, a1, b0, b1, orders);
}

PairRule pair_rule_2d(const std::array<Vec2, 3>& t1, const std::array<Vec2, 3>& t2, double s,
                      const QuadOrders& orders) {
  require_fractional_order(s);
  int shared1[3], shared2[3], n_shared = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (t1[i][0] == t2[j][0] && t1[i][1] == t2[j][1]) {
        shared1[n_shared] = i;
        shared2[n_shared] = j;
        ++n_shared;
      }
  if (n_shared == 3) return identical_2d(t1, s, orders.singular);
  if (n_shared == 2) {
    const int i2 = 3 - shared1[0] - shared1[1];  // local index of the non-shared vertex
    const int j2 = 3 - shared2[0] - shared2[1];
    return shared_edge_2d(t1[shared1[0]], t1[shared1[1]], t1[i2], t2[j2], s, orders.singular);
  }
  if (n_shared == 1) {
    const int i = shared1[0], j = shared2[0];
    return shared_vertex_2d(t1[i], t1[(i + 1) % 3], t1[(i + 2) % 3], t2[(j + 1) % 3],
                            t2[(j + 2) % 3], s, orders.singular);
  }
  return disjoint_2d(t1, t2, orders);
}

PairRule singular_pair_rule(PairClass classification, int n, double s, int k) {
  QuadOrders orders;
  orders.singular = k;
  orders.near = k;
  orders.far = k;
  if (n == 1) {
    switch (classification) {
      case PairClass::identical: return pair_rule_1d(0, 1, 0, 1, s, orders);
      case PairClass::shared_vertex: return pair_rule_1d(0, 1, 1, 2, s, orders);
      case PairClass::disjoint: return pair_rule_1d(0, 1, 5, 6, s, orders);
      default: throw std::invalid_argument("singular_pair_rule: unsupported classification in 1D");
    }
  }
  if (n != 2) throw std::invalid_argument("singular_pair_rule: n must be 1 or 2");
  const std::array<Vec2, 3> T{{{0, 0}, {1, 0}, {0, 1}}};
  switch (classification) {
    case PairClass::identical: return pair_rule_2d(T, T, s, orders);
    case PairClass::shared_facet:
      return pair_rule_2d(T, {{{0, 0}, {1, 0}, {0.5, -1}}}, s, orders);
    case PairClass::shared_vertex:
      return pair_rule_2d(T, {{{0, 0}, {-1, 0}, {0, -1}}}, s, orders);
    case PairClass::disjoint: return pair_rule_2d(T, {{{5, 0}, {6, 0}, {5, 1}}}, s, orders);
  }
  throw std::invalid_argument("singular_pair_rule: unsupported classification");
}

}  // namespace fracfem
