#include "fracfem/pde_solve.hpp"

#include <stdexcept>

namespace fracfem {

namespace {

Eigen::VectorXd residual_vec(const FeSystem& sys, const NonlinearityPreset& preset,
                             const Eigen::VectorXd& u, const Eigen::VectorXd& rhs) {
  Eigen::VectorXd r = sys.A * u - rhs;
  if (preset.tag != NonlinearityPreset::Tag::none)
    r += assemble_semilinear(*sys.mesh, u, preset).first;
  return r;
}

}  // namespace

double residual(const FeSystem& sys, const NonlinearityPreset& preset, const Eigen::VectorXd& u,
                const Eigen::VectorXd& rhs) {
  return residual_vec(sys, preset, u, rhs).norm();
}

std::pair<Eigen::VectorXd, SolveReport> solve_state(const FeSystem& sys,
                                                    const NonlinearityPreset& preset,
                                                    const Eigen::VectorXd& rhs, double tol_newton,
                                                    int max_iter, const Eigen::VectorXd* init) {
  SolveReport rep;
  Eigen::VectorXd u = init ? *init : Eigen::VectorXd::Zero(sys.n_dofs());
  Eigen::VectorXd r = residual_vec(sys, preset, u, rhs);
  double rn = r.norm();
  while (rep.iterations < max_iter) {
    if (rn <= tol_newton) {
      rep.converged = true;
      break;
    }
    Eigen::MatrixXd jac = sys.A;
    if (preset.tag != NonlinearityPreset::Tag::none)
      jac += assemble_semilinear(*sys.mesh, u, preset).second;
    const Eigen::VectorXd d = Eigen::LDLT<Eigen::MatrixXd>(jac).solve(-r);
    double t = 1.0;
    Eigen::VectorXd u_t, r_t;
    double rn_t = rn;
    for (int back = 0; back <= 30; ++back) {
      u_t = u + t * d;
      r_t = residual_vec(sys, preset, u_t, rhs);
      rn_t = r_t.norm();
      if (rn_t <= (1.0 - 0.25 * t) * rn) break;
      t *= 0.5;
    }
    u = u_t;
    r = r_t;
    rn = rn_t;
    rep.damping.push_back(t);
    ++rep.iterations;
  }
  if (rn <= tol_newton) rep.converged = true;
  rep.residual = rn;
  rep.max_abs_u = u.size() ? u.cwiseAbs().maxCoeff() : 0.0;
  return {std::move(u), rep};
}

Eigen::VectorXd solve_adjoint(const FeSystem& sys, const Eigen::VectorXd& u,
                              const NonlinearityPreset& preset, const Eigen::VectorXd& rhs) {
  Eigen::MatrixXd jac = sys.A;
  if (preset.tag != NonlinearityPreset::Tag::none)
    jac += assemble_semilinear(*sys.mesh, u, preset).second;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(jac);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("solve_adjoint: factorization failed");
  return ldlt.solve(rhs);
}

}  // namespace fracfem
