#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "fracfem/assembly.hpp"

namespace fracfem {

struct SolveReport {
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  std::vector<double> damping;  // accepted step length per iteration
  double max_abs_u = 0.0;       // logged L-infinity bound of the discrete solution
};

/// Damped Newton for A u + a_vec(u) = rhs (Armijo backtracking, factor 1/2,
/// at most 30 backtracks). Non-convergence is reported, never silently.
std::pair<Eigen::VectorXd, SolveReport> solve_state(const FeSystem& sys,
                                                    const NonlinearityPreset& preset,
                                                    const Eigen::VectorXd& rhs,
                                                    double tol_newton = 1e-10, int max_iter = 50,
                                                    const Eigen::VectorXd* init = nullptr);

/// (A + J(u_h)) p = rhs; the coefficient matrix is symmetric positive definite
/// since a' >= 0.
Eigen::VectorXd solve_adjoint(const FeSystem& sys, const Eigen::VectorXd& u,
                              const NonlinearityPreset& preset, const Eigen::VectorXd& rhs);

double residual(const FeSystem& sys, const NonlinearityPreset& preset, const Eigen::VectorXd& u,
                const Eigen::VectorXd& rhs);

}  // namespace fracfem
