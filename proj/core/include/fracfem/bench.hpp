#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "fracfem/control.hpp"

namespace fracfem {

struct ExactSolution {
  std::function<double(const Vec2&)> u;
  std::function<double(const Vec2&)> f;  // source whose weak solution is u
  bool f_singular = false;
  double energy_sq = 0.0;  // |||u|||^2 when known in closed form
  bool has_energy = false;
  std::string tag;
};

/// Solution of (-Delta)^s u = 1 on the unit ball: u = c_{n,s} (1-|x|^2)^s_+.
ExactSolution getoor(int n, double s);

/// d_{n,s} with (-Delta)^s (1-|x|^2)^s_+ = d_{n,s}; equals 1/c_{n,s}.
double getoor_inverse_constant(int n, double s);

/// Exact solution lambda (1-|x|^2)^s_+ of the semilinear problem with
/// f = lambda d_{n,s} + a(lambda (1-|x|^2)^s).
ExactSolution manufactured_semilinear(int n, double s, double lambda,
                                      const NonlinearityPreset& preset);

struct ControlBenchmark {
  ControlProblem prob;
  std::function<double(const Vec2&)> u_exact, p_exact, z_exact;
  double lambda_u = 0.0, lambda_p = 0.0;
  std::string tag;
};

/// Control benchmark on (-1,1) with known triplet: ubar, pbar are Getoor
/// profiles, zbar = Pi(-pbar/alpha) has an active plateau at hi by
/// construction, and the extra state source e plus the target u_d close the
/// first-order system exactly. 1D only.
ControlBenchmark manufactured_control(int n, double s, double alpha, double lo, double hi,
                                      const NonlinearityPreset& preset = NonlinearityPreset::none());

/// || field - exact ||_{L2(Omega)}; field given as values at all mesh
/// vertices. Boundary elements use graded subdivision (the exact solutions
/// behave like dist^s there).
double error_l2(const SimplicialMesh& mesh, const std::vector<double>& vertex_values,
                const std::function<double(const Vec2&)>& exact, bool boundary_singular = true,
                int degree = 8);

/// Expand an interior-dof coefficient vector to per-vertex values (0 on boundary).
std::vector<double> to_vertex_values(const SimplicialMesh& mesh, const DofMap& dofs,
                                     const Eigen::VectorXd& u);

double energy_sq_discrete(const FeSystem& sys, const Eigen::VectorXd& u);

/// Galerkin identity path: |||u - u_h|||^2 = |||u|||^2 - |||u_h|||^2.
/// `energy_sq` may also be an overkill reference energy |||u_ref|||^2.
/// Throws if the difference is negative beyond -1e-10 (quadrature inconsistency).
double energy_error_identity(double energy_sq, const FeSystem& sys, const Eigen::VectorXd& u);

/// |||u - u_h|||^2 = |||u|||^2 - 2 c0 \int u_h + |||u_h|||^2, valid whenever the
/// weak residual f - a(u) of the exact solution is the constant c0 (the ball
/// benchmarks). No Galerkin orthogonality needed, so it also covers the
/// semilinear case and non-Galerkin fields.
double energy_error_ball_source(double energy_sq, double source_const, const FeSystem& sys,
                                const Eigen::VectorXd& u);

/// Reference path for nested meshes: e = I_ref(u_h) - u_ref, error = sqrt(e^T A_ref e).
double energy_error_reference(const FeSystem& ref_sys, const Eigen::VectorXd& u_ref,
                              const SimplicialMesh& coarse_mesh, const DofMap& coarse_dofs,
                              const Eigen::VectorXd& u_coarse);

/// || z_h - z_exact ||_{L2}; P0 control read per element, variational control
/// evaluated through the projection formula.
double error_control_l2(const OptimalTriplet& t, const ControlProblem& prob, const FeSystem& sys,
                        const std::function<double(const Vec2&)>& z_exact, int degree = 8);

struct ErrorRow {
  double h = 0.0;
  int n_dofs = 0;
  double e_l2 = std::numeric_limits<double>::quiet_NaN();
  double e_energy = std::numeric_limits<double>::quiet_NaN();
  double e_ctrl = std::numeric_limits<double>::quiet_NaN();
  int newton_iters = 0;
  double max_abs_u = 0.0;
  double runtime_s = 0.0;
};

struct ErrorTable {
  int n = 1;
  double s = 0.5;
  double mu = 1.0;
  std::string scheme = "state_only";
  std::string preset = "none";
  std::string benchmark;
  std::vector<ErrorRow> rows;  // ordered by decreasing h

  /// Columns h,N,e_L2,EOC_L2,e_energy,EOC_energy,e_ctrl,EOC_ctrl; floats with
  /// 17 significant digits; missing values and undefined EOCs print as nan.
  std::string to_csv() const;
  std::string to_json() const;
};

/// eoc[k] = log(e_{k-1}/e_k) / log(h_{k-1}/h_k); eoc[0] = nan, as is any
/// entry with a nonpositive or missing error.
std::vector<double> eoc(const std::vector<double>& h, const std::vector<double>& err);

/// Rate r of the model e = C h^r |log h|^q with q given.
std::vector<double> eoc_log_corrected(const std::vector<double>& h,
                                      const std::vector<double>& err, double q = 1.0);

}  // namespace fracfem
