#include "fracfem/mesh.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace fracfem {

// ---------------------------------------------------------------------------
// geometry helpers
// ---------------------------------------------------------------------------

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return dist(p, a);
  double t = dot(p - a, ab) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return dist(p, a + t * ab);
}

double polygon_signed_area(const std::vector<Vec2>& poly) {
  double s = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) s += cross(poly[i], poly[(i + 1) % n]);
  return 0.5 * s;
}

namespace {

bool segments_properly_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

}  // namespace

bool polygon_is_simple(const std::vector<Vec2>& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  if (std::abs(polygon_signed_area(poly)) < 1e-14) return false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // skip adjacent edges (shared endpoint)
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_properly_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]))
        return false;
    }
  }
  return true;
}

bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& poly) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i)
    if (point_segment_distance(p, poly[i], poly[(i + 1) % n]) < 1e-14) return true;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if ((poly[i][1] > p[1]) != (poly[j][1] > p[1]) &&
        p[0] < (poly[j][0] - poly[i][0]) * (p[1] - poly[i][1]) / (poly[j][1] - poly[i][1]) +
                   poly[i][0])
      inside = !inside;
  }
  return inside;
}

std::vector<std::array<int, 3>> triangulate_polygon(const std::vector<Vec2>& poly) {
  std::vector<int> idx(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) idx[i] = static_cast<int>(i);

  auto is_ear = [&](std::size_t k) {
    const std::size_t m = idx.size();
    const Vec2& a = poly[idx[(k + m - 1) % m]];
    const Vec2& b = poly[idx[k]];
    const Vec2& c = poly[idx[(k + 1) % m]];
    if (cross(b - a, c - a) <= 1e-15) return false;  // reflex or degenerate
    for (std::size_t j = 0; j < m; ++j) {
      const int vj = idx[j];
      if (vj == idx[(k + m - 1) % m] || vj == idx[k] || vj == idx[(k + 1) % m]) continue;
      const Vec2& p = poly[vj];
      const double w0 = cross(b - a, p - a), w1 = cross(c - b, p - b), w2 = cross(a - c, p - c);
      if (w0 >= -1e-15 && w1 >= -1e-15 && w2 >= -1e-15) return false;
    }
    return true;
  };

  std::vector<std::array<int, 3>> tris;
  std::size_t guard = 0;
  while (idx.size() > 3) {
    bool clipped = false;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (is_ear(k)) {
        const std::size_t m = idx.size();
        tris.push_back({idx[(k + m - 1) % m], idx[k], idx[(k + 1) % m]});
        idx.erase(idx.begin() + static_cast<long>(k));
        clipped = true;
        break;
      }
    }
    if (!clipped || ++guard > 4 * poly.size())
      throw std::invalid_argument("triangulate_polygon: polygon is not simple");
  }
  tris.push_back({idx[0], idx[1], idx[2]});

  // Lawson flips: ear clipping can leave skinny triangles whose shape would
  // survive every later bisection. Flip interior diagonals while that improves
  // the worse of the two minimum angles.
  auto tri_min_angle = [&](const Vec2& a, const Vec2& b, const Vec2& c) {
    auto ang = [](const Vec2& p, const Vec2& q, const Vec2& r) {
      const Vec2 u = q - p, v = r - p;
      return std::acos(std::clamp(dot(u, v) / (norm(u) * norm(v)), -1.0, 1.0));
    };
    return std::min({ang(a, b, c), ang(b, c, a), ang(c, a, b)});
  };
  auto ccw = [&](int a, int b, int c) {
    if (cross(poly[b] - poly[a], poly[c] - poly[a]) < 0) std::swap(b, c);
    return std::array<int, 3>{a, b, c};
  };
  bool flipped = true;
  for (std::size_t round = 0; flipped && round < 3 * poly.size(); ++round) {
    flipped = false;
    for (std::size_t i = 0; i < tris.size(); ++i)
      for (std::size_t j = i + 1; j < tris.size(); ++j) {
        int shared[2], ns = 0, oi = -1, oj = -1;
        for (int a : tris[i])
          for (int b : tris[j])
            if (a == b && ns < 2) shared[ns++] = a;
        if (ns != 2) continue;
        for (int a : tris[i])
          if (a != shared[0] && a != shared[1]) oi = a;
        for (int b : tris[j])
          if (b != shared[0] && b != shared[1]) oj = b;
        const Vec2 u = poly[shared[0]], v = poly[shared[1]], p = poly[oi], q = poly[oj];
        // the flip is valid only when the quad p,u,q,v is strictly convex
        const Vec2 quad[4] = {p, u, q, v};
        int pos = 0, neg = 0;
        for (int k = 0; k < 4; ++k) {
          const double c2 = cross(quad[(k + 1) % 4] - quad[k], quad[(k + 2) % 4] - quad[(k + 1) % 4]);
          pos += c2 > 1e-14;
          neg += c2 < -1e-14;
        }
        if (pos != 4 && neg != 4) continue;
        const double before = std::min(tri_min_angle(u, v, p), tri_min_angle(u, v, q));
        const double after = std::min(tri_min_angle(p, q, u), tri_min_angle(p, q, v));
        if (after > before + 1e-12) {
          tris[i] = ccw(oi, oj, shared[0]);
          tris[j] = ccw(oi, oj, shared[1]);
          flipped = true;
        }
      }
  }
  return tris;
}

// ---------------------------------------------------------------------------
// Domain
// ---------------------------------------------------------------------------

Domain Domain::interval(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("Domain::interval: need a < b");
  Domain d;
  d.dim = 1;
  d.a = a;
  d.b = b;
  return d;
}

Domain Domain::make_polygon(std::vector<Vec2> pts) {
  if (pts.size() < 3) throw std::invalid_argument("Domain::make_polygon: need >= 3 vertices");
  if (polygon_signed_area(pts) < 0) std::reverse(pts.begin(), pts.end());
  if (!polygon_is_simple(pts))
    throw std::invalid_argument("Domain::make_polygon: polygon is degenerate or self-intersecting");
  Domain d;
  d.dim = 2;
  d.polygon = std::move(pts);
  return d;
}

double Domain::measure() const {
  return dim == 1 ? (b - a) : polygon_signed_area(polygon);
}

double Domain::boundary_distance(const Vec2& p) const {
  if (dim == 1) return std::min(p[0] - a, b - p[0]);
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i)
    best = std::min(best, point_segment_distance(p, polygon[i], polygon[(i + 1) % n]));
  return best;
}

// ---------------------------------------------------------------------------
// SimplicialMesh
// ---------------------------------------------------------------------------

namespace {

uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b);
}

}  // namespace

void SimplicialMesh::finalize() {
  const std::size_t ne = elements.size();
  elem_diameter.assign(ne, 0.0);
  elem_measure.assign(ne, 0.0);
  elem_barycenter.assign(ne, Vec2{0, 0});
  elem_boundary_dist.assign(ne, 0.0);
  boundary_vertex.assign(vertices.size(), 0);
  h_mesh = 0.0;

  if (dim == 1) {
    for (std::size_t e = 0; e < ne; ++e) {
      const Vec2 p0 = vertices[elements[e][0]], p1 = vertices[elements[e][1]];
      const double len = std::abs(p1[0] - p0[0]);
      if (len <= 0) throw std::runtime_error("mesh: degenerate 1D element");
      elem_diameter[e] = len;
      elem_measure[e] = len;
      elem_barycenter[e] = {0.5 * (p0[0] + p1[0]), 0.0};
    }
    // endpoints of the interval are the boundary
    for (std::size_t v = 0; v < vertices.size(); ++v) {
      if (std::abs(vertices[v][0] - domain.a) < 1e-13 * (domain.b - domain.a) ||
          std::abs(vertices[v][0] - domain.b) < 1e-13 * (domain.b - domain.a))
        boundary_vertex[v] = 1;
    }
  } else {
    std::unordered_map<uint64_t, int> edge_count;
    for (std::size_t e = 0; e < ne; ++e) {
      const Vec2 p0 = vertex(static_cast<int>(e), 0), p1 = vertex(static_cast<int>(e), 1),
                 p2 = vertex(static_cast<int>(e), 2);
      const double area = 0.5 * std::abs(cross(p1 - p0, p2 - p0));
      if (area <= 0) throw std::runtime_error("mesh: degenerate 2D element");
      elem_measure[e] = area;
      elem_diameter[e] = std::max({dist(p0, p1), dist(p1, p2), dist(p2, p0)});
      elem_barycenter[e] = (1.0 / 3.0) * (p0 + p1 + p2);
      for (int k = 0; k < 3; ++k)
        edge_count[edge_key(elements[e][k], elements[e][(k + 1) % 3])]++;
    }
    for (std::size_t e = 0; e < ne; ++e) {
      for (int k = 0; k < 3; ++k) {
        const int a = elements[e][k], b = elements[e][(k + 1) % 3];
        if (edge_count[edge_key(a, b)] == 1) {
          boundary_vertex[a] = 1;
          boundary_vertex[b] = 1;
        }
      }
    }
  }

  for (std::size_t e = 0; e < ne; ++e) {
    h_mesh = std::max(h_mesh, elem_diameter[e]);
    const double d = domain.boundary_distance(elem_barycenter[e]) - 0.5 * elem_diameter[e];
    elem_boundary_dist[e] = std::max(0.0, d);
  }
  bins_.clear();
}

double SimplicialMesh::shape_regularity() const {
  double sigma = 0.0;
  for (std::size_t e = 0; e < elements.size(); ++e) {
    double rho;
    if (dim == 1) {
      rho = 0.5 * elem_diameter[e];
    } else {
      const Vec2 p0 = vertex(static_cast<int>(e), 0), p1 = vertex(static_cast<int>(e), 1),
                 p2 = vertex(static_cast<int>(e), 2);
      const double s = 0.5 * (dist(p0, p1) + dist(p1, p2) + dist(p2, p0));
      rho = elem_measure[e] / s;  // inradius = area / semiperimeter
    }
    sigma = std::max(sigma, elem_diameter[e] / rho);
  }
  return sigma;
}

PairClass SimplicialMesh::pair_classification(int e1, int e2) const {
  if (e1 == e2) return PairClass::identical;
  int shared = 0;
  const int nv = n_vertices_per_elem();
  for (int i = 0; i < nv; ++i)
    for (int j = 0; j < nv; ++j)
      if (elements[e1][i] == elements[e2][j]) ++shared;
  if (shared == nv) return PairClass::identical;
  if (dim == 1) return shared == 1 ? PairClass::shared_vertex : PairClass::disjoint;
  if (shared == 2) return PairClass::shared_facet;
  if (shared == 1) return PairClass::shared_vertex;
  return PairClass::disjoint;
}

void SimplicialMesh::build_bins() const {
  bbox_lo_ = {1e300, 1e300};
  bbox_hi_ = {-1e300, -1e300};
  for (const auto& v : vertices) {
    for (int d = 0; d < 2; ++d) {
      bbox_lo_[d] = std::min(bbox_lo_[d], v[d]);
      bbox_hi_[d] = std::max(bbox_hi_[d], v[d]);
    }
  }
  const int target = static_cast<int>(std::sqrt(static_cast<double>(elements.size()))) + 1;
  bins_nx_ = std::max(1, target);
  bins_ny_ = std::max(1, target);
  bins_.assign(static_cast<std::size_t>(bins_nx_) * bins_ny_, {});
  auto bin_of = [&](double x, double y) {
    int ix = static_cast<int>((x - bbox_lo_[0]) / (bbox_hi_[0] - bbox_lo_[0]) * bins_nx_);
    int iy = static_cast<int>((y - bbox_lo_[1]) / (bbox_hi_[1] - bbox_lo_[1]) * bins_ny_);
    ix = std::clamp(ix, 0, bins_nx_ - 1);
    iy = std::clamp(iy, 0, bins_ny_ - 1);
    return std::pair{ix, iy};
  };
  for (std::size_t e = 0; e < elements.size(); ++e) {
    Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
    for (int k = 0; k < 3; ++k) {
      const Vec2 p = vertex(static_cast<int>(e), k);
      for (int d = 0; d < 2; ++d) {
        lo[d] = std::min(lo[d], p[d]);
        hi[d] = std::max(hi[d], p[d]);
      }
    }
    const auto [ix0, iy0] = bin_of(lo[0], lo[1]);
    const auto [ix1, iy1] = bin_of(hi[0], hi[1]);
    for (int ix = ix0; ix <= ix1; ++ix)
      for (int iy = iy0; iy <= iy1; ++iy)
        bins_[static_cast<std::size_t>(iy) * bins_nx_ + ix].push_back(static_cast<int>(e));
  }
}

std::optional<int> SimplicialMesh::locate(const Vec2& p) const {
  if (dim == 1) {
    // elements are in construction order but not necessarily sorted; linear scan with tolerance
    for (std::size_t e = 0; e < elements.size(); ++e) {
      const double x0 = vertex(static_cast<int>(e), 0)[0], x1 = vertex(static_cast<int>(e), 1)[0];
      const double lo = std::min(x0, x1), hi = std::max(x0, x1);
      if (p[0] >= lo - 1e-14 && p[0] <= hi + 1e-14) return static_cast<int>(e);
    }
    return std::nullopt;
  }
  if (bins_.empty()) build_bins();
  int ix = static_cast<int>((p[0] - bbox_lo_[0]) / (bbox_hi_[0] - bbox_lo_[0]) * bins_nx_);
  int iy = static_cast<int>((p[1] - bbox_lo_[1]) / (bbox_hi_[1] - bbox_lo_[1]) * bins_ny_);
  if (ix < 0 || ix >= bins_nx_ || iy < 0 || iy >= bins_ny_) return std::nullopt;
  for (int e : bins_[static_cast<std::size_t>(iy) * bins_nx_ + ix]) {
    const Vec2 p0 = vertex(e, 0), p1 = vertex(e, 1), p2 = vertex(e, 2);
    const double det = cross(p1 - p0, p2 - p0);
    const double l1 = cross(p - p0, p2 - p0) / det;
    const double l2 = cross(p1 - p0, p - p0) / det;
    const double tol = -1e-12;
    if (l1 >= tol && l2 >= tol && 1.0 - l1 - l2 >= tol) return e;
  }
  return std::nullopt;
}

double SimplicialMesh::eval_p1(const std::vector<double>& vertex_values, const Vec2& p) const {
  const auto e = locate(p);
  if (!e) return 0.0;
  if (dim == 1) {
    const int i0 = elements[*e][0], i1 = elements[*e][1];
    const double x0 = vertices[i0][0], x1 = vertices[i1][0];
    const double t = (p[0] - x0) / (x1 - x0);
    return (1 - t) * vertex_values[i0] + t * vertex_values[i1];
  }
  const int i0 = elements[*e][0], i1 = elements[*e][1], i2 = elements[*e][2];
  const Vec2 p0 = vertices[i0], p1 = vertices[i1], p2 = vertices[i2];
  const double det = cross(p1 - p0, p2 - p0);
  const double l1 = cross(p - p0, p2 - p0) / det;
  const double l2 = cross(p1 - p0, p - p0) / det;
  return (1 - l1 - l2) * vertex_values[i0] + l1 * vertex_values[i1] + l2 * vertex_values[i2];
}

std::optional<std::string> SimplicialMesh::check_conforming() const {
  if (dim == 1) {
    std::vector<std::pair<double, double>> segs;
    for (std::size_t e = 0; e < elements.size(); ++e) {
      const double x0 = vertex(static_cast<int>(e), 0)[0], x1 = vertex(static_cast<int>(e), 1)[0];
      segs.emplace_back(std::min(x0, x1), std::max(x0, x1));
    }
    std::sort(segs.begin(), segs.end());
    const double tol = 1e-12 * (domain.b - domain.a);
    if (std::abs(segs.front().first - domain.a) > tol) return "1D mesh does not start at a";
    for (std::size_t i = 1; i < segs.size(); ++i)
      if (std::abs(segs[i].first - segs[i - 1].second) > tol)
        return "1D mesh has a gap or overlap";
    if (std::abs(segs.back().second - domain.b) > tol) return "1D mesh does not end at b";
    return std::nullopt;
  }

  std::unordered_map<uint64_t, int> edge_count;
  double total_area = 0.0;
  for (std::size_t e = 0; e < elements.size(); ++e) {
    total_area += elem_measure[e];
    for (int k = 0; k < 3; ++k)
      edge_count[edge_key(elements[e][k], elements[e][(k + 1) % 3])]++;
  }
  for (const auto& [key, cnt] : edge_count)
    if (cnt > 2) return "edge shared by more than two elements";
  if (std::abs(total_area - domain.measure()) > 1e-9 * domain.measure())
    return "element areas do not sum to the domain area (overlap or gap)";
  // hanging nodes: no vertex strictly inside another element's edge
  for (const auto& [key, cnt] : edge_count) {
    const int a = static_cast<int>(key >> 32), b = static_cast<int>(key & 0xffffffffu);
    const Vec2 pa = vertices[a], pb = vertices[b];
    for (std::size_t v = 0; v < vertices.size(); ++v) {
      if (static_cast<int>(v) == a || static_cast<int>(v) == b) continue;
      const double len = dist(pa, pb);
      if (point_segment_distance(vertices[v], pa, pb) < 1e-12 * len) {
        const double t = dot(vertices[v] - pa, pb - pa) / (len * len);
        if (t > 1e-10 && t < 1.0 - 1e-10) return "hanging node detected";
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// builders
// ---------------------------------------------------------------------------

namespace {

SimplicialMesh make_1d_mesh(const Domain& dom, const std::vector<double>& points) {
  SimplicialMesh mesh;
  mesh.dim = 1;
  mesh.domain = dom;
  for (double x : points) mesh.vertices.push_back({x, 0.0});
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    mesh.elements.push_back({static_cast<int>(i), static_cast<int>(i + 1), -1});
  mesh.finalize();
  return mesh;
}

void check_build(const SimplicialMesh& mesh, const MeshBuildOptions& opts) {
  if (mesh.n_elements() > opts.element_cap) {
    std::ostringstream os;
    os << "mesh build exceeds element cap: " << mesh.n_elements() << " > " << opts.element_cap;
    throw std::runtime_error(os.str());
  }
  const double sigma = mesh.shape_regularity();
  if (sigma > opts.sigma_max) {
    std::ostringstream os;
    os << "mesh violates shape regularity: sigma = " << sigma << " > " << opts.sigma_max;
    throw std::runtime_error(os.str());
  }
}

// Longest-edge bisection with recursive neighbor refinement. Keeps the mesh
// conforming and the shape-regularity constant bounded.
class Bisector {
 public:
  explicit Bisector(SimplicialMesh& mesh) : mesh_(mesh) {
    for (std::size_t e = 0; e < mesh_.elements.size(); ++e) add_incidence(static_cast<int>(e));
  }

  void bisect(int e, std::size_t element_cap) {
    int guard = 0;
    while (true) {
      if (mesh_.elements.size() >= element_cap)
        throw std::runtime_error(
            "graded refinement exceeds element cap (grading exponent too aggressive)");
      if (++guard > 1 << 22) throw std::runtime_error("bisection did not terminate");
      const auto [a, b] = longest_edge(e);
      const int nb = neighbor_across(e, a, b);
      if (nb >= 0) {
        const auto [na, nbv] = longest_edge(nb);
        if (edge_key(na, nbv) != edge_key(a, b)) {
          bisect(nb, element_cap);
          continue;  // incidence changed; recompute
        }
      }
      const int m = midpoint(a, b);
      split(e, a, b, m);
      if (nb >= 0) split(nb, a, b, m);
      return;
    }
  }

 private:
  SimplicialMesh& mesh_;
  std::unordered_map<uint64_t, std::vector<int>> edge_elems_;
  std::unordered_map<uint64_t, int> midpoints_;

  void add_incidence(int e) {
    for (int k = 0; k < 3; ++k)
      edge_elems_[edge_key(mesh_.elements[e][k], mesh_.elements[e][(k + 1) % 3])].push_back(e);
  }
  void remove_incidence(int e) {
    for (int k = 0; k < 3; ++k) {
      auto& v = edge_elems_[edge_key(mesh_.elements[e][k], mesh_.elements[e][(k + 1) % 3])];
      v.erase(std::remove(v.begin(), v.end(), e), v.end());
    }
  }

  std::pair<int, int> longest_edge(int e) const {
    double best = -1.0;
    std::pair<int, int> edge{-1, -1};
    for (int k = 0; k < 3; ++k) {
      const int a = mesh_.elements[e][k], b = mesh_.elements[e][(k + 1) % 3];
      const double len = dist(mesh_.vertices[a], mesh_.vertices[b]);
      // deterministic tie-break on vertex indices
      if (len > best + 1e-14 * best ||
          (std::abs(len - best) <= 1e-14 * best && edge_key(a, b) < edge_key(edge.first, edge.second))) {
        best = len;
        edge = {a, b};
      }
    }
    return edge;
  }

  int neighbor_across(int e, int a, int b) const {
    const auto it = edge_elems_.find(edge_key(a, b));
    if (it == edge_elems_.end()) return -1;
    for (int other : it->second)
      if (other != e) return other;
    return -1;
  }

  int midpoint(int a, int b) {
    const auto key = edge_key(a, b);
    const auto it = midpoints_.find(key);
    if (it != midpoints_.end()) return it->second;
    mesh_.vertices.push_back(0.5 * (mesh_.vertices[a] + mesh_.vertices[b]));
    const int m = static_cast<int>(mesh_.vertices.size()) - 1;
    midpoints_.emplace(key, m);
    return m;
  }

  void split(int e, int a, int b, int m) {
    remove_incidence(e);
    int c = -1;
    for (int k = 0; k < 3; ++k) {
      const int v = mesh_.elements[e][k];
      if (v != a && v != b) c = v;
    }
    mesh_.elements[e] = {a, c, m};
    mesh_.elements.push_back({c, b, m});
    add_incidence(e);
    add_incidence(static_cast<int>(mesh_.elements.size()) - 1);
  }
};

struct ElemGeom {
  double diam, bdist;  // diameter and floored barycenter boundary distance
  bool touches;
};

ElemGeom elem_geom(const SimplicialMesh& mesh, int e) {
  const Vec2 p0 = mesh.vertex(e, 0), p1 = mesh.vertex(e, 1), p2 = mesh.vertex(e, 2);
  ElemGeom g;
  g.diam = std::max({dist(p0, p1), dist(p1, p2), dist(p2, p0)});
  const Vec2 bc = (1.0 / 3.0) * (p0 + p1 + p2);
  g.bdist = std::max(0.0, mesh.domain.boundary_distance(bc) - 0.5 * g.diam);
  g.touches = false;
  for (int k = 0; k < 3; ++k)
    if (mesh.domain.boundary_distance(mesh.vertex(e, k)) < 1e-12 * g.diam) g.touches = true;
  return g;
}

}  // namespace

SimplicialMesh build_quasi_uniform(const Domain& domain, double h, const MeshBuildOptions& opts) {
  if (!(h > 0)) throw std::invalid_argument("build_quasi_uniform: h must be positive");

  if (domain.dim == 1) {
    const std::size_t m =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((domain.b - domain.a) / h)));
    if (m > opts.element_cap) throw std::runtime_error("mesh build exceeds element cap");
    std::vector<double> pts(m + 1);
    for (std::size_t i = 0; i <= m; ++i)
      pts[i] = domain.a + (domain.b - domain.a) * static_cast<double>(i) / static_cast<double>(m);
    auto mesh = make_1d_mesh(domain, pts);
    check_build(mesh, opts);
    return mesh;
  }

  SimplicialMesh mesh;
  mesh.dim = 2;
  mesh.domain = domain;
  mesh.vertices = domain.polygon;
  // criss-cross initial split: one interior point per polygon triangle keeps
  // the initial elements well shaped for convex inputs
  for (const auto& t : triangulate_polygon(domain.polygon)) mesh.elements.push_back({t[0], t[1], t[2]});
  mesh.finalize();

  // uniform red refinement until max h_T <= h
  while (mesh.h_mesh > h) {
    if (4 * mesh.n_elements() > opts.element_cap)
      throw std::runtime_error("mesh build exceeds element cap");
    SimplicialMesh fine;
    fine.dim = 2;
    fine.domain = domain;
    fine.vertices = mesh.vertices;
    std::unordered_map<uint64_t, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = edge_key(a, b);
      const auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      fine.vertices.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
      const int m = static_cast<int>(fine.vertices.size()) - 1;
      mid.emplace(key, m);
      return m;
    };
    for (const auto& el : mesh.elements) {
      const int m01 = midpoint(el[0], el[1]), m12 = midpoint(el[1], el[2]),
                m02 = midpoint(el[0], el[2]);
      fine.elements.push_back({el[0], m01, m02});
      fine.elements.push_back({m01, el[1], m12});
      fine.elements.push_back({m02, m12, el[2]});
      fine.elements.push_back({m01, m12, m02});
    }
    fine.finalize();
    mesh = std::move(fine);
  }
  check_build(mesh, opts);
  return mesh;
}

SimplicialMesh build_graded(const Domain& domain, const GradingSpec& spec,
                            const MeshBuildOptions& opts) {
  spec.validate();
  if (spec.mu == 1.0) return build_quasi_uniform(domain, spec.c_sigma * spec.h, opts);

  if (domain.dim == 1) {
    // greedy size selection from each endpoint toward the midpoint; both
    // grading inequalities hold by construction (with the barycenter-based
    // distance proxy, dist of the k-th element equals the accumulated length)
    const double len = domain.b - domain.a, half = 0.5 * len;
    const double expo = (spec.mu - 1.0) / spec.mu;
    const double safety = 0.95;
    std::vector<double> sizes;
    double x = 0.0;
    sizes.push_back(std::min(half, safety * spec.c_sigma * std::pow(spec.h, spec.mu)));
    x = sizes.back();
    while (x < half) {
      double step = safety * spec.c_sigma * spec.h * std::pow(x, expo);
      step = std::min(step, spec.h);
      step = std::min(step, half - x);
      if (2 * (sizes.size() + 1) > opts.element_cap)
        throw std::runtime_error(
            "graded refinement exceeds element cap (grading exponent too aggressive)");
      sizes.push_back(step);
      x += step;
    }
    std::vector<double> pts;
    pts.push_back(domain.a);
    for (double sstep : sizes) pts.push_back(pts.back() + sstep);
    pts.back() = domain.a + half;
    for (std::size_t i = sizes.size(); i-- > 0;) pts.push_back(domain.b - (pts[i] - domain.a));
    pts.back() = domain.b;
    auto mesh = make_1d_mesh(domain, pts);
    check_build(mesh, opts);
    return mesh;
  }

  auto mesh = build_quasi_uniform(domain, spec.c_sigma * spec.h, opts);
  const double expo = (spec.mu - 1.0) / spec.mu;
  const double bound_bdry = spec.c_sigma * std::pow(spec.h, spec.mu);

  bool changed = true;
  while (changed) {
    changed = false;
    Bisector bisector(mesh);
    const std::size_t ne_snapshot = mesh.elements.size();
    for (std::size_t e = 0; e < ne_snapshot; ++e) {
      // geometry may be stale after earlier bisections in this sweep; recompute
      const ElemGeom g = elem_geom(mesh, static_cast<int>(e));
      const double bound = g.touches || g.bdist == 0.0
                               ? bound_bdry
                               : std::min(spec.c_sigma * spec.h * std::pow(g.bdist, expo),
                                          spec.c_sigma * spec.h);
      if (g.diam > bound) {
        bisector.bisect(static_cast<int>(e), opts.element_cap);
        changed = true;
      }
    }
  }
  mesh.finalize();
  check_build(mesh, opts);
  return mesh;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

std::string SimplicialMesh::to_json() const {
  nlohmann::json j;
  j["dimension"] = dim;
  auto& verts = j["vertices"] = nlohmann::json::array();
  for (const auto& v : vertices) {
    if (dim == 1)
      verts.push_back({v[0]});
    else
      verts.push_back({v[0], v[1]});
  }
  auto& elems = j["elements"] = nlohmann::json::array();
  for (const auto& el : elements) {
    if (dim == 1)
      elems.push_back({el[0], el[1]});
    else
      elems.push_back({el[0], el[1], el[2]});
  }
  j["boundary"] = std::vector<bool>(boundary_vertex.begin(), boundary_vertex.end());
  return j.dump();
}

SimplicialMesh SimplicialMesh::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  SimplicialMesh mesh;
  mesh.dim = j.at("dimension").get<int>();
  for (const auto& v : j.at("vertices"))
    mesh.vertices.push_back({v.at(0).get<double>(), mesh.dim == 2 ? v.at(1).get<double>() : 0.0});
  for (const auto& el : j.at("elements")) {
    if (mesh.dim == 1)
      mesh.elements.push_back({el.at(0).get<int>(), el.at(1).get<int>(), -1});
    else
      mesh.elements.push_back({el.at(0).get<int>(), el.at(1).get<int>(), el.at(2).get<int>()});
  }
  // reconstruct the domain from the geometry
  if (mesh.dim == 1) {
    double lo = 1e300, hi = -1e300;
    for (const auto& v : mesh.vertices) {
      lo = std::min(lo, v[0]);
      hi = std::max(hi, v[0]);
    }
    mesh.domain = Domain::interval(lo, hi);
  } else {
    // boundary edges form a closed cycle; trace it
    std::map<uint64_t, int> edge_count;
    for (const auto& el : mesh.elements)
      for (int k = 0; k < 3; ++k) edge_count[edge_key(el[k], el[(k + 1) % 3])]++;
    std::multimap<int, int> next;
    for (const auto& [key, cnt] : edge_count) {
      if (cnt == 1) {
        const int a = static_cast<int>(key >> 32), b = static_cast<int>(key & 0xffffffffu);
        next.emplace(a, b);
        next.emplace(b, a);
      }
    }
    if (next.empty()) throw std::runtime_error("mesh JSON: no boundary found");
    std::vector<Vec2> poly;
    const int start = next.begin()->first;
    int prev = -1, cur = start;
    do {
      poly.push_back(mesh.vertices[cur]);
      auto range = next.equal_range(cur);
      int nxt = -1;
      for (auto it = range.first; it != range.second; ++it)
        if (it->second != prev) nxt = it->second;
      if (nxt < 0) throw std::runtime_error("mesh JSON: boundary is not a closed cycle");
      prev = cur;
      cur = nxt;
    } while (cur != start);
    // drop collinear chain points so the polygon is minimal
    std::vector<Vec2> minimal;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 a = poly[(i + n - 1) % n], b = poly[i], c = poly[(i + 1) % n];
      if (std::abs(cross(b - a, c - b)) > 1e-12 * dist(a, c)) minimal.push_back(b);
    }
    mesh.domain = Domain::make_polygon(minimal);
  }
  mesh.finalize();
  if (j.contains("boundary")) {
    const auto flags = j.at("boundary").get<std::vector<bool>>();
    if (flags.size() != mesh.vertices.size())
      throw std::runtime_error("mesh JSON: boundary flag count mismatch");
    for (std::size_t v = 0; v < flags.size(); ++v)
      if (static_cast<bool>(mesh.boundary_vertex[v]) != flags[v])
        throw std::runtime_error("mesh JSON: boundary flags inconsistent with geometry");
  }
  return mesh;
}

}  // namespace fracfem
