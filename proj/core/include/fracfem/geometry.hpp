#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace fracfem {

using Vec2 = std::array<double, 2>;

inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator*(double s, const Vec2& a) { return {s * a[0], s * a[1]}; }

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double cross(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }
inline double norm(const Vec2& a) { return std::sqrt(dot(a, a)); }
inline double dist(const Vec2& a, const Vec2& b) { return norm(a - b); }

/// Distance from point p to the closed segment [a,b].
double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

/// Signed area of a polygon (positive for counterclockwise orientation).
double polygon_signed_area(const std::vector<Vec2>& poly);

/// True if the polygon is simple (no two non-adjacent edges intersect) and has nonzero area.
bool polygon_is_simple(const std::vector<Vec2>& poly);

/// Winding-rule point-in-polygon test (boundary points count as inside).
bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& poly);

/// Ear-clipping triangulation of a simple polygon given in CCW order.
/// Returns vertex-index triples into `poly`.
std::vector<std::array<int, 3>> triangulate_polygon(const std::vector<Vec2>& poly);

}  // namespace fracfem
