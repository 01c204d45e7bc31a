#pragma once

#include <array>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracfem/geometry.hpp"

namespace fracfem {

/// The computational domain: an open interval (n=1) or a simple polygon (n=2).
struct Domain {
  int dim = 1;
  double a = -1.0, b = 1.0;      // interval endpoints (n=1)
  std::vector<Vec2> polygon;     // CCW vertices (n=2)

  static Domain interval(double a, double b);
  static Domain make_polygon(std::vector<Vec2> pts);
  static Domain unit_square() {
    return make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  }

  double measure() const;
  /// Distance from a point to the domain boundary.
  double boundary_distance(const Vec2& p) const;
};

enum class PairClass { identical, shared_facet, shared_vertex, disjoint };

struct GradingSpec {
  double h = 0.25;     // target coarse size
  double mu = 1.0;     // grading exponent, >= 1
  double c_sigma = 1.0;

  void validate() const {
    if (!(h > 0)) throw std::invalid_argument("GradingSpec: h must be positive");
    if (!(mu >= 1)) throw std::invalid_argument("GradingSpec: mu must be >= 1");
    if (!(c_sigma > 0)) throw std::invalid_argument("GradingSpec: c_sigma must be positive");
  }
};

struct MeshBuildOptions {
  double sigma_max = 10.0;
  std::size_t element_cap = 200000;
};

/// Conforming simplicial mesh of an interval (n=1) or polygon (n=2).
/// Immutable after construction.
class SimplicialMesh {
 public:
  int dim = 1;
  Domain domain;
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> elements;  // n=1 uses entries 0,1; elements[e][2] == -1
  std::vector<char> boundary_vertex;

  // per-element geometry, filled by finalize()
  std::vector<double> elem_diameter;
  std::vector<double> elem_measure;
  std::vector<Vec2> elem_barycenter;
  std::vector<double> elem_boundary_dist;  // dist(barycenter, dOmega) - h_T/2, floored at 0
  double h_mesh = 0.0;

  int n_vertices_per_elem() const { return dim + 1; }
  std::size_t n_elements() const { return elements.size(); }

  Vec2 vertex(int e, int local) const { return vertices[elements[e][local]]; }

  /// Recompute derived geometry and boundary flags. Throws on degenerate elements.
  void finalize();

  double shape_regularity() const;
  PairClass pair_classification(int e1, int e2) const;

  /// Locate the element containing p (nullopt if outside). Uses a bin grid in 2D.
  std::optional<int> locate(const Vec2& p) const;
  /// Evaluate a P1 function given by per-vertex values at p (0 outside the mesh).
  double eval_p1(const std::vector<double>& vertex_values, const Vec2& p) const;

  /// Conformity + nondegeneracy check (O(M^2) in 2D); returns a message on failure.
  std::optional<std::string> check_conforming() const;

  std::string to_json() const;
  static SimplicialMesh from_json(const std::string& text);

 private:
  // point-location acceleration
  mutable std::vector<std::vector<int>> bins_;
  mutable int bins_nx_ = 0, bins_ny_ = 0;
  mutable Vec2 bbox_lo_{0, 0}, bbox_hi_{0, 0};
  void build_bins() const;
};

SimplicialMesh build_quasi_uniform(const Domain& domain, double h,
                                   const MeshBuildOptions& opts = {});
SimplicialMesh build_graded(const Domain& domain, const GradingSpec& spec,
                            const MeshBuildOptions& opts = {});

}  // namespace fracfem
