#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "fracfem/mesh.hpp"
#include "fracfem/pair_rules.hpp"

namespace fracfem {

struct NonlinearityPreset {
  enum class Tag { none, linear, cubic };
  Tag tag = Tag::none;
  double c = 0.0;

  static NonlinearityPreset none() { return {Tag::none, 0.0}; }
  static NonlinearityPreset linear(double c) { return {Tag::linear, c}; }
  static NonlinearityPreset cubic(double c) { return {Tag::cubic, c}; }

  double value(double u) const {
    switch (tag) {
      case Tag::none: return 0.0;
      case Tag::linear: return c * u;
      case Tag::cubic: return c * u * u * u;
    }
    return 0.0;
  }
  double deriv(double u) const {
    switch (tag) {
      case Tag::none: return 0.0;
      case Tag::linear: return c;
      case Tag::cubic: return 3.0 * c * u * u;
    }
    return 0.0;
  }
  double deriv2(double u) const { return tag == Tag::cubic ? 6.0 * c * u : 0.0; }
};

/// Interior-vertex dof numbering (vertex order), shared by all assemblers.
struct DofMap {
  std::vector<int> dof_of_vertex;  // -1 on boundary
  std::vector<int> vertex_of_dof;
  int n_dofs() const { return static_cast<int>(vertex_of_dof.size()); }
};
DofMap make_dof_map(const SimplicialMesh& mesh);

struct FeSystem {
  std::shared_ptr<const SimplicialMesh> mesh;
  double s = 0.5;
  DofMap dofs;
  Eigen::MatrixXd A;             // fractional stiffness, interior dofs
  Eigen::SparseMatrix<double> M;  // P1 mass, interior dofs
  int n_dofs() const { return dofs.n_dofs(); }
};

FeSystem make_fe_system(std::shared_ptr<const SimplicialMesh> mesh, double s, int workers = 1,
                        const QuadOrders& orders = {});

/// A[i][j] = (C(n,s)/2) [ sum over element pairs + 2 * complement mass term ].
/// Deterministic for any worker count: pair contributions are accumulated in
/// fixed-size chunks of leading-element indices and merged in chunk order.
Eigen::MatrixXd assemble_stiffness(const SimplicialMesh& mesh, double s, int workers = 1,
                                   const QuadOrders& orders = {});

Eigen::SparseMatrix<double> assemble_mass(const SimplicialMesh& mesh);

/// F[i] = \int f phi_i over interior hats; `boundary_singular` switches
/// boundary-touching elements to graded subdivision.
Eigen::VectorXd assemble_load(const SimplicialMesh& mesh,
                              const std::function<double(const Vec2&)>& f,
                              bool boundary_singular = false, int degree = 6);

/// (a_vec with \int a(u_h) phi_i, J with \int a'(u_h) phi_i phi_j).
std::pair<Eigen::VectorXd, Eigen::SparseMatrix<double>> assemble_semilinear(
    const SimplicialMesh& mesh, const Eigen::VectorXd& u, const NonlinearityPreset& preset,
    int degree = 6);

/// Load vector of a P0 control: entries \int z phi_i (closed form).
Eigen::VectorXd control_to_load(const SimplicialMesh& mesh, const std::vector<double>& z_elem);

/// Row-major float64 dump with a 16-byte header {int32 n, float64 s, int32 N}.
void dump_matrix_binary(const std::string& path, const Eigen::MatrixXd& A, int n, double s);

}  // namespace fracfem
