#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "fracfem/assembly.hpp"
#include "fracfem/pde_solve.hpp"

namespace fracfem {

inline double project_box(double v, double lo, double hi) {
  return std::min(hi, std::max(v, lo));
}

struct ControlBounds {
  double lo = -1.0, hi = 1.0;
};

/// min (1/2)||u - u_d||^2 + (alpha/2)||z||^2  s.t.  A u + a(u) = z + e, lo <= z <= hi.
struct ControlProblem {
  NonlinearityPreset a;
  std::function<double(const Vec2&)> u_d;
  bool u_d_singular = false;  // boundary-singular target -> graded quadrature
  std::function<double(const Vec2&)> extra_source;  // e(x); may be empty
  bool extra_source_singular = false;
  double alpha = 1.0;
  ControlBounds bounds;
};

struct OptimalTriplet {
  Eigen::VectorXd u, p;
  std::vector<double> z_elem;  // fully discrete control (P0)
  bool variational = false;    // control implicit: z(x) = Pi(-p_h(x)/alpha)
  double objective = 0.0;
  double fixed_point_residual = 0.0;
  int outer_iterations = 0;
  bool converged = false;
};

struct OptimalityReport {
  double state_residual = 0.0;
  double adjoint_residual = 0.0;
  double vi_violation = 0.0;  // most negative value of g_T (v - z_T), v in {lo,hi}
  double fixed_point_residual = 0.0;
};

double objective_value(const ControlProblem& prob, const FeSystem& sys,
                       const std::vector<double>& z_elem);

/// L2-Riesz gradient restricted to P0: g|_T = <p_h>_T + alpha z|_T.
std::vector<double> gradient_p0(const ControlProblem& prob, const FeSystem& sys,
                                const std::vector<double>& z_elem);

/// Projected gradient with Armijo backtracking for globalization, then an
/// active-set Newton polish of the coupled optimality system, which enforces
/// the projection fixed point z|_T = Pi(-<p>_T/alpha) to near machine level.
OptimalTriplet solve_fully_discrete(const ControlProblem& prob, const FeSystem& sys,
                                    double tol_opt = 1e-9,
                                    const std::vector<double>* z_init = nullptr);

/// Variational discretization: the control never appears as an iterate; the
/// coupled system in (u_h, p_h) with z(x) = Pi(-p_h(x)/alpha) is solved by a
/// semismooth Newton method. 1D state loads split elements at the projection
/// kinks (exact); 2D uses fixed order-8 quadrature.
OptimalTriplet solve_variational(const ControlProblem& prob, const FeSystem& sys,
                                 double tol_opt = 1e-9);

OptimalityReport check_optimality(const OptimalTriplet& t, const ControlProblem& prob,
                                  const FeSystem& sys);

/// Pointwise evaluation of a triplet's control (P0 lookup or implicit projection).
double eval_control(const OptimalTriplet& t, const ControlProblem& prob, const FeSystem& sys,
                    const Vec2& x);

std::string triplet_to_json(const OptimalTriplet& t, const FeSystem& sys);

/// \int Pi(-p_h/alpha) phi_i (the state load of the variational control).
Eigen::VectorXd projected_adjoint_load(const SimplicialMesh& mesh, const DofMap& dofs,
                                       const Eigen::VectorXd& p, double alpha,
                                       const ControlBounds& b);

}  // namespace fracfem
