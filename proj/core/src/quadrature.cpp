#include "fracfem/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace fracfem {

namespace {

std::vector<QuadPoint1D> make_gauss_legendre(int k) {
  if (k < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  std::vector<QuadPoint1D> rule(k);
  const int m = (k + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton iteration from the Chebyshev estimate
    double x = std::cos(M_PI * (i + 0.75) / (k + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < k; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = k * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule[i] = {0.5 * (1.0 - x), 0.5 * w};
    rule[k - 1 - i] = {0.5 * (1.0 + x), 0.5 * w};
  }
  return rule;
}

std::vector<TriQuadPoint> make_triangle_rule(int degree) {
  std::vector<TriQuadPoint> rule;
  auto perm3 = [&](double a, double b, double w) {
    rule.push_back({a, b, w});
    rule.push_back({b, 1.0 - a - b, w});
    rule.push_back({1.0 - a - b, a, w});
  };
  if (degree <= 1) {
    rule.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0});
  } else if (degree == 2) {
    perm3(1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0);
  } else if (degree <= 4) {
    perm3(0.445948490915965, 0.445948490915965, 0.223381589678011);
    perm3(0.091576213509771, 0.091576213509771, 0.109951743655322);
  } else {
    // collapsed tensor Gauss (Duffy); exact for the requested total degree
    const int k = degree / 2 + 1;
    const auto& g = gauss_legendre(k);
    const auto& g2 = gauss_legendre(k + 1);
    for (const auto& qu : g2)
      for (const auto& qv : g) {
        const double l1 = qu.x;
        const double l2 = qv.x * (1.0 - qu.x);
        rule.push_back({l1, l2, 2.0 * qu.w * qv.w * (1.0 - qu.x)});
      }
  }
  return rule;
}

template <typename Key, typename Rule>
const Rule& cached(std::map<Key, Rule>& cache, std::mutex& mtx, Key key, Rule (*make)(Key)) {
  std::scoped_lock lock(mtx);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, make(key)).first;
  return it->second;
}

}  // namespace

const std::vector<QuadPoint1D>& gauss_legendre(int k) {
  static std::map<int, std::vector<QuadPoint1D>> cache;
  static std::mutex mtx;
  return cached(cache, mtx, k, make_gauss_legendre);
}

const std::vector<TriQuadPoint>& triangle_rule(int degree) {
  static std::map<int, std::vector<TriQuadPoint>> cache;
  static std::mutex mtx;
  return cached(cache, mtx, degree, make_triangle_rule);
}

double integrate_interval(const std::function<double(double)>& f, double a, double b, int k) {
  double sum = 0.0;
  for (const auto& q : gauss_legendre(k)) sum += q.w * f(a + (b - a) * q.x);
  return (b - a) * sum;
}

double integrate_interval_graded(const std::function<double(double)>& f, double a, double b,
                                 double singular_end, int depth, int k) {
  // geometric cells (t/2, t) toward the singular end; the final sliver of
  // relative size 2^-depth is dropped (integrable singularities only)
  const bool at_a = std::abs(singular_end - a) < std::abs(singular_end - b);
  double sum = 0.0;
  double t = 1.0;
  for (int level = 0; level < depth; ++level) {
    const double s = 0.5 * t;
    const double lo = at_a ? a + s * (b - a) : b - t * (b - a);
    const double hi = at_a ? a + t * (b - a) : b - s * (b - a);
    // stop once rounding pushes the cell onto the singular end itself
    if (!(lo < hi) || (at_a ? !(lo > a) : !(hi < b))) break;
    sum += integrate_interval(f, lo, hi, k);
    t = s;
  }
  return sum;
}

double integrate_triangle(const std::function<double(const Vec2&)>& f, const Vec2& p0,
                          const Vec2& p1, const Vec2& p2, int degree) {
  const double area = 0.5 * std::abs(cross(p1 - p0, p2 - p0));
  double sum = 0.0;
  for (const auto& q : triangle_rule(degree)) {
    const Vec2 x = (1.0 - q.l1 - q.l2) * p0 + q.l1 * p1 + q.l2 * p2;
    sum += q.w * f(x);
  }
  return area * sum;
}

double integrate_triangle_graded_vertex(const std::function<double(const Vec2&)>& f,
                                        const Vec2& apex, const Vec2& p1, const Vec2& p2,
                                        int depth, int degree) {
  double sum = 0.0;
  double t = 1.0;
  for (int level = 0; level < depth; ++level) {
    const double s = 0.5 * t;
    const Vec2 a1 = apex + t * (p1 - apex), a2 = apex + t * (p2 - apex);
    const Vec2 b1 = apex + s * (p1 - apex), b2 = apex + s * (p2 - apex);
    if (a1 == b1 && a2 == b2) break;  // shell width underflowed at the apex
    // shell between the two homothetic triangles, split into two triangles
    sum += integrate_triangle(f, b1, a1, a2, degree);
    sum += integrate_triangle(f, b1, a2, b2, degree);
    t = s;
  }
  return sum;
}

double integrate_triangle_graded_edge(const std::function<double(const Vec2&)>& f, const Vec2& e0,
                                      const Vec2& e1, const Vec2& apex, int depth, int degree) {
  // top piece: homothetic triangle at the apex side
  double sum = integrate_triangle(f, 0.5 * (apex + e0), 0.5 * (apex + e1), apex, degree);
  double t = 0.5;  // apex barycentric coordinate of the current strip top
  for (int level = 0; level < depth; ++level) {
    const double s = 0.5 * t;
    const Vec2 a0 = t * apex + (1.0 - t) * e0, a1 = t * apex + (1.0 - t) * e1;
    const Vec2 b0 = s * apex + (1.0 - s) * e0, b1 = s * apex + (1.0 - s) * e1;
    if (a0 == b0 && a1 == b1) break;  // strip width underflowed at the edge
    sum += integrate_triangle(f, b0, b1, a1, degree);
    sum += integrate_triangle(f, b0, a1, a0, degree);
    t = s;
  }
  return sum;
}

}  // namespace fracfem
