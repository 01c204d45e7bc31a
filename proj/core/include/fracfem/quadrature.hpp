#pragma once

#include <functional>
#include <vector>

#include "fracfem/geometry.hpp"

namespace fracfem {

struct QuadPoint1D {
  double x, w;  // on [0,1], weights sum to 1
};

/// Gauss-Legendre rule with k points on [0,1]. Cached per order.
const std::vector<QuadPoint1D>& gauss_legendre(int k);

struct TriQuadPoint {
  double l1, l2, w;  // barycentric (l0 = 1-l1-l2); weights sum to 1
};

/// Symmetric rules for low degree, collapsed tensor Gauss above. Cached.
const std::vector<TriQuadPoint>& triangle_rule(int degree);

double integrate_interval(const std::function<double(double)>& f, double a, double b, int k);

/// Geometric subdivision (ratio 1/2) toward `singular_end` for endpoint singularities.
double integrate_interval_graded(const std::function<double(double)>& f, double a, double b,
                                 double singular_end, int depth, int k);

double integrate_triangle(const std::function<double(const Vec2&)>& f, const Vec2& p0,
                          const Vec2& p1, const Vec2& p2, int degree);

/// Homothetic shells (ratio 1/2) toward the vertex `apex`; for integrands
/// singular only at that vertex.
double integrate_triangle_graded_vertex(const std::function<double(const Vec2&)>& f,
                                        const Vec2& apex, const Vec2& p1, const Vec2& p2,
                                        int depth, int degree);

/// Strips (ratio 1/2) toward the edge (e0,e1); for integrands singular on that edge.
double integrate_triangle_graded_edge(const std::function<double(const Vec2&)>& f, const Vec2& e0,
                                      const Vec2& e1, const Vec2& apex, int depth, int degree);

}  // namespace fracfem
