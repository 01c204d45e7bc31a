#include "fracfem/control.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fracfem/element_quad.hpp"
#include "fracfem/quadrature.hpp"

#include <nlohmann/json.hpp>

namespace fracfem {

namespace {

struct Loads {
  Eigen::VectorXd F_e, F_ud;
};

Loads make_loads(const ControlProblem& prob, const FeSystem& sys) {
  Loads l;
  const int nd = sys.n_dofs();
  l.F_e = prob.extra_source
              ? assemble_load(*sys.mesh, prob.extra_source, prob.extra_source_singular)
              : Eigen::VectorXd::Zero(nd);
  if (!prob.u_d) throw std::invalid_argument("ControlProblem: tracking target u_d is required");
  l.F_ud = assemble_load(*sys.mesh, prob.u_d, prob.u_d_singular);
  return l;
}

double eval_p1_on_elem(const FeSystem& sys, const Eigen::VectorXd& u, int e, const Vec2& x) {
  const auto lam = barycentric(*sys.mesh, e, x);
  double val = 0.0;
  for (int a = 0; a < sys.mesh->n_vertices_per_elem(); ++a) {
    const int i = sys.dofs.dof_of_vertex[sys.mesh->elements[e][a]];
    if (i >= 0) val += lam[a] * u[i];
  }
  return val;
}

double elem_mean(const FeSystem& sys, const Eigen::VectorXd& p, int e) {
  double sum = 0.0;
  const int nv = sys.mesh->n_vertices_per_elem();
  for (int a = 0; a < nv; ++a) {
    const int i = sys.dofs.dof_of_vertex[sys.mesh->elements[e][a]];
    if (i >= 0) sum += p[i];
  }
  return sum / nv;
}

double tracking_misfit(const ControlProblem& prob, const FeSystem& sys,
                       const Eigen::VectorXd& u) {
  double total = 0.0;
  for (std::size_t e = 0; e < sys.mesh->n_elements(); ++e) {
    auto f = [&](const Vec2& x) {
      const double d = eval_p1_on_elem(sys, u, static_cast<int>(e), x) - prob.u_d(x);
      return d * d;
    };
    total += prob.u_d_singular
                 ? integrate_element_graded(*sys.mesh, static_cast<int>(e), f, 8)
                 : integrate_element(*sys.mesh, static_cast<int>(e), f, 8);
  }
  return 0.5 * total;
}

Eigen::VectorXd state_for(const ControlProblem& prob, const FeSystem& sys, const Loads& loads,
                          const std::vector<double>& z, const Eigen::VectorXd* warm) {
  const Eigen::VectorXd rhs = control_to_load(*sys.mesh, z) + loads.F_e;
  auto [u, rep] = solve_state(sys, prob.a, rhs, 1e-12, 50, warm);
  if (!rep.converged) throw std::runtime_error("control: state solver did not converge");
  return u;
}

Eigen::VectorXd adjoint_for(const ControlProblem& prob, const FeSystem& sys, const Loads& loads,
                            const Eigen::VectorXd& u) {
  return solve_adjoint(sys, u, prob.a, Eigen::VectorXd(sys.M * u - loads.F_ud));
}

// \int a''(u_h) p_h phi_i phi_j (second-order coupling of the adjoint in u)
Eigen::MatrixXd curvature_matrix(const FeSystem& sys, const NonlinearityPreset& preset,
                                 const Eigen::VectorXd& u, const Eigen::VectorXd& p) {
  const int nd = sys.n_dofs();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nd, nd);
  if (preset.tag != NonlinearityPreset::Tag::cubic) return K;
  const auto& mesh = *sys.mesh;
  const int nv = mesh.n_vertices_per_elem();
  for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
    int gd[3];
    for (int a = 0; a < nv; ++a) gd[a] = sys.dofs.dof_of_vertex[mesh.elements[e][a]];
    for (int a = 0; a < nv; ++a) {
      if (gd[a] < 0) continue;
      for (int b = a; b < nv; ++b) {
        if (gd[b] < 0) continue;
        const double val = integrate_element(
            mesh, static_cast<int>(e),
            [&](const Vec2& x) {
              const auto lam = barycentric(mesh, static_cast<int>(e), x);
              return preset.deriv2(eval_p1_on_elem(sys, u, static_cast<int>(e), x)) *
                     eval_p1_on_elem(sys, p, static_cast<int>(e), x) * lam[a] * lam[b];
            },
            6);
        K(gd[a], gd[b]) += val;
        if (a != b) K(gd[b], gd[a]) += val;
      }
    }
  }
  return K;
}

Eigen::MatrixXd state_jacobian(const FeSystem& sys, const NonlinearityPreset& preset,
                               const Eigen::VectorXd& u) {
  Eigen::MatrixXd jac = sys.A;
  if (preset.tag != NonlinearityPreset::Tag::none)
    jac += assemble_semilinear(*sys.mesh, u, preset).second;
  return jac;
}

double control_sq_norm_p0(const FeSystem& sys, const std::vector<double>& z) {
  double sum = 0.0;
  for (std::size_t e = 0; e < sys.mesh->n_elements(); ++e)
    sum += z[e] * z[e] * sys.mesh->elem_measure[e];
  return sum;
}

// Subdivision of one element at the kinks of x -> Pi(-p_h(x)/alpha):
// 1D splits exactly at the crossings; 2D keeps the whole triangle (order-8
// rule downstream). Calls fn(x, w) with quadrature points and weights.
template <typename Fn>
void for_projected_quad(const SimplicialMesh& mesh, const DofMap& dofs,
                        const Eigen::VectorXd& p, double alpha, const ControlBounds& b, int e,
                        Fn&& fn) {
  const int nv = mesh.n_vertices_per_elem();
  double pv[3];
  for (int a = 0; a < nv; ++a) {
    const int i = dofs.dof_of_vertex[mesh.elements[e][a]];
    pv[a] = i >= 0 ? p[i] : 0.0;
  }
  if (mesh.dim == 1) {
    const double x0 = mesh.vertex(e, 0)[0], x1 = mesh.vertex(e, 1)[0];
    const double q0 = -pv[0] / alpha, q1 = -pv[1] / alpha;  // affine in t
    double brk[4] = {0.0, 1.0, 1.0, 1.0};
    int nb = 2;
    if (q1 != q0)
      for (double bound : {b.lo, b.hi}) {
        const double t = (bound - q0) / (q1 - q0);
        if (t > 0.0 && t < 1.0) brk[nb++] = t;
      }
    std::sort(brk, brk + nb);
    for (int c = 0; c + 1 < nb; ++c) {
      const double ta = brk[c], tb = brk[c + 1];
      if (tb - ta < 1e-15) continue;
      for (const auto& q : gauss_legendre(4)) {
        const double t = ta + (tb - ta) * q.x;
        fn(Vec2{x0 + (x1 - x0) * t, 0.0}, q.w * (tb - ta) * std::abs(x1 - x0));
      }
    }
  } else {
    for (const auto& q : triangle_rule(8)) {
      const Vec2 x = (1.0 - q.l1 - q.l2) * mesh.vertex(e, 0) + q.l1 * mesh.vertex(e, 1) +
                     q.l2 * mesh.vertex(e, 2);
      fn(x, q.w * mesh.elem_measure[e]);
    }
  }
}

double eval_p1_dofs(const SimplicialMesh& mesh, const DofMap& dofs, const Eigen::VectorXd& v,
                    int e, const Vec2& x) {
  const auto lam = barycentric(mesh, e, x);
  double val = 0.0;
  for (int a = 0; a < mesh.n_vertices_per_elem(); ++a) {
    const int i = dofs.dof_of_vertex[mesh.elements[e][a]];
    if (i >= 0) val += lam[a] * v[i];
  }
  return val;
}

// (1/alpha) \int_{inactive} phi_i phi_j, the p-derivative of the projected load
Eigen::MatrixXd inactive_mass(const SimplicialMesh& mesh, const DofMap& dofs,
                              const Eigen::VectorXd& p, double alpha, const ControlBounds& b) {
  const int nd = dofs.n_dofs();
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nd, nd);
  const int nv = mesh.n_vertices_per_elem();
  for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
    int gd[3];
    for (int a = 0; a < nv; ++a) gd[a] = dofs.dof_of_vertex[mesh.elements[e][a]];
    for_projected_quad(mesh, dofs, p, alpha, b, static_cast<int>(e), [&](const Vec2& x, double w) {
      const double q = -eval_p1_dofs(mesh, dofs, p, static_cast<int>(e), x) / alpha;
      if (q <= b.lo || q >= b.hi) return;
      const auto lam = barycentric(mesh, static_cast<int>(e), x);
      for (int a = 0; a < nv; ++a) {
        if (gd[a] < 0) continue;
        for (int c = 0; c < nv; ++c)
          if (gd[c] >= 0) B(gd[a], gd[c]) += w / alpha * lam[a] * lam[c];
      }
    });
  }
  return B;
}

}  // namespace

Eigen::VectorXd projected_adjoint_load(const SimplicialMesh& mesh, const DofMap& dofs,
                                       const Eigen::VectorXd& p, double alpha,
                                       const ControlBounds& b) {
  Eigen::VectorXd F = Eigen::VectorXd::Zero(dofs.n_dofs());
  const int nv = mesh.n_vertices_per_elem();
  for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
    for_projected_quad(mesh, dofs, p, alpha, b, static_cast<int>(e), [&](const Vec2& x, double w) {
      const double z =
          project_box(-eval_p1_dofs(mesh, dofs, p, static_cast<int>(e), x) / alpha, b.lo, b.hi);
      const auto lam = barycentric(mesh, static_cast<int>(e), x);
      for (int a = 0; a < nv; ++a) {
        const int i = dofs.dof_of_vertex[mesh.elements[e][a]];
        if (i >= 0) F[i] += w * z * lam[a];
      }
    });
  }
  return F;
}

double objective_value(const ControlProblem& prob, const FeSystem& sys,
                       const std::vector<double>& z) {
  const Loads loads = make_loads(prob, sys);
  const Eigen::VectorXd u = state_for(prob, sys, loads, z, nullptr);
  return tracking_misfit(prob, sys, u) + 0.5 * prob.alpha * control_sq_norm_p0(sys, z);
}

std::vector<double> gradient_p0(const ControlProblem& prob, const FeSystem& sys,
                                const std::vector<double>& z) {
  const Loads loads = make_loads(prob, sys);
  const Eigen::VectorXd u = state_for(prob, sys, loads, z, nullptr);
  const Eigen::VectorXd p = adjoint_for(prob, sys, loads, u);
  std::vector<double> g(z.size());
  for (std::size_t e = 0; e < z.size(); ++e)
    g[e] = elem_mean(sys, p, static_cast<int>(e)) + prob.alpha * z[e];
  return g;
}

OptimalTriplet solve_fully_discrete(const ControlProblem& prob, const FeSystem& sys,
                                    double tol_opt, const std::vector<double>* z_init) {
  if (!(prob.bounds.lo < prob.bounds.hi))
    throw std::invalid_argument("control bounds must satisfy lo < hi");
  const Loads loads = make_loads(prob, sys);
  const auto& mesh = *sys.mesh;
  const std::size_t m = mesh.n_elements();
  const int nd = sys.n_dofs();
  const int nv = mesh.n_vertices_per_elem();
  const double lo = prob.bounds.lo, hi = prob.bounds.hi, alpha = prob.alpha;

  OptimalTriplet t;
  std::vector<double> z =
      z_init ? *z_init : std::vector<double>(m, project_box(0.0, lo, hi));
  Eigen::VectorXd u = state_for(prob, sys, loads, z, nullptr);
  Eigen::VectorXd p = adjoint_for(prob, sys, loads, u);
  double j = tracking_misfit(prob, sys, u) + 0.5 * alpha * control_sq_norm_p0(sys, z);

  // phase 1: projected gradient with Armijo backtracking (global progress,
  // monotone objective)
  double gamma = 1.0 / alpha;
  for (int it = 0; it < 60; ++it) {
    std::vector<double> g(m), z_t(m);
    double step_inf = 0.0, pred = 0.0;
    for (std::size_t e = 0; e < m; ++e) {
      g[e] = elem_mean(sys, p, static_cast<int>(e)) + alpha * z[e];
      z_t[e] = project_box(z[e] - gamma * g[e], lo, hi);
      step_inf = std::max(step_inf, std::abs(z_t[e] - z[e]));
      pred += g[e] * (z[e] - z_t[e]) * mesh.elem_measure[e];
    }
    if (step_inf < 1e-6) break;
    Eigen::VectorXd u_t = state_for(prob, sys, loads, z_t, &u);
    const double j_t = tracking_misfit(prob, sys, u_t) + 0.5 * alpha * control_sq_norm_p0(sys, z_t);
    if (j_t <= j - 1e-4 * pred) {
      z = std::move(z_t);
      u = std::move(u_t);
      p = adjoint_for(prob, sys, loads, u);
      j = j_t;
      gamma = std::min(gamma * 1.3, 1e3 / alpha);
    } else {
      gamma *= 0.5;
      if (gamma < 1e-12 / alpha) break;
    }
  }

  // phase 2: active-set Newton on the coupled optimality system
  const double res_scale = 1.0 + loads.F_ud.norm() + loads.F_e.norm();
  const double tol_inner = std::min(tol_opt, 1e-13 * res_scale);
  std::vector<char> act(m, 0), act_prev(m, 99);
  bool inner_ok = false;
  for (int outer = 0; outer < 50; ++outer) {
    for (std::size_t e = 0; e < m; ++e) {
      const double w = -elem_mean(sys, p, static_cast<int>(e)) / alpha;
      act[e] = w <= lo ? -1 : (w >= hi ? 1 : 0);
      z[e] = project_box(w, lo, hi);
    }
    auto residuals = [&](const Eigen::VectorXd& uu, const Eigen::VectorXd& pp,
                         const std::vector<double>& zz, Eigen::VectorXd& R1, Eigen::VectorXd& R2,
                         std::vector<double>& R3) {
      R1 = sys.A * uu - control_to_load(mesh, zz) - loads.F_e;
      Eigen::MatrixXd jac = sys.A;
      if (prob.a.tag != NonlinearityPreset::Tag::none) {
        auto [av, J] = assemble_semilinear(mesh, uu, prob.a);
        R1 += av;
        jac += J;
      }
      R2 = jac * pp - Eigen::VectorXd(sys.M * uu) + loads.F_ud;
      double r3sq = 0.0;
      for (std::size_t e = 0; e < m; ++e) {
        R3[e] = act[e] == 0 ? alpha * zz[e] + elem_mean(sys, pp, static_cast<int>(e)) : 0.0;
        r3sq += R3[e] * R3[e];
      }
      return std::sqrt(R1.squaredNorm() + R2.squaredNorm() + r3sq);
    };
    Eigen::VectorXd R1, R2;
    std::vector<double> R3(m);
    double rn = residuals(u, p, z, R1, R2, R3);
    inner_ok = rn <= tol_inner;
    for (int inner = 0; inner < 15 && !inner_ok; ++inner) {
      const Eigen::MatrixXd jac = state_jacobian(sys, prob.a, u);
      const Eigen::MatrixXd K = curvature_matrix(sys, prob.a, u, p);
      Eigen::MatrixXd M2 = Eigen::MatrixXd::Zero(2 * nd, 2 * nd);
      M2.topLeftCorner(nd, nd) = jac;
      M2.bottomRightCorner(nd, nd) = jac;
      M2.bottomLeftCorner(nd, nd) = K - Eigen::MatrixXd(sys.M);
      Eigen::VectorXd rhs(2 * nd);
      rhs.head(nd) = -R1;
      rhs.tail(nd) = -R2;
      // eliminate the inactive controls: dz = (-R3 - <dp>)/alpha
      for (std::size_t e = 0; e < m; ++e) {
        if (act[e] != 0) continue;
        const double bw = mesh.elem_measure[e] / nv;
        int gd[3];
        for (int a = 0; a < nv; ++a) gd[a] = sys.dofs.dof_of_vertex[mesh.elements[e][a]];
        for (int a = 0; a < nv; ++a) {
          if (gd[a] < 0) continue;
          rhs[gd[a]] -= bw * R3[e] / alpha;
          for (int b = 0; b < nv; ++b)
            if (gd[b] >= 0) M2(gd[a], nd + gd[b]) += bw / (alpha * nv);
        }
      }
      const Eigen::VectorXd d = M2.partialPivLu().solve(rhs);
      double step = 1.0;
      Eigen::VectorXd u_t, p_t, R1t, R2t;
      std::vector<double> z_t(m), R3t(m);
      double rn_t = rn;
      for (int back = 0; back <= 30; ++back) {
        u_t = u + step * d.head(nd);
        p_t = p + step * d.tail(nd);
        for (std::size_t e = 0; e < m; ++e)
          z_t[e] = act[e] == 0
                       ? z[e] + step * (-R3[e] - elem_mean(sys, Eigen::VectorXd(d.tail(nd)),
                                                           static_cast<int>(e))) /
                                    alpha
                       : z[e];
        rn_t = residuals(u_t, p_t, z_t, R1t, R2t, R3t);
        if (rn_t <= (1.0 - 0.25 * step) * rn) break;
        step *= 0.5;
      }
      u = u_t;
      p = p_t;
      z = z_t;
      R1 = R1t;
      R2 = R2t;
      R3 = R3t;
      rn = rn_t;
      inner_ok = rn <= tol_inner;
    }
    t.outer_iterations = outer + 1;
    if (inner_ok && act == act_prev) break;
    act_prev = act;
  }

  t.u = u;
  t.p = p;
  t.z_elem = z;
  t.objective = tracking_misfit(prob, sys, u) + 0.5 * alpha * control_sq_norm_p0(sys, z);
  double fp = 0.0;
  for (std::size_t e = 0; e < m; ++e)
    fp = std::max(fp, std::abs(z[e] - project_box(-elem_mean(sys, p, static_cast<int>(e)) / alpha,
                                                  lo, hi)));
  t.fixed_point_residual = fp;
  t.converged = inner_ok && fp <= tol_opt;
  return t;
}

OptimalTriplet solve_variational(const ControlProblem& prob, const FeSystem& sys,
                                 double tol_opt) {
  if (!(prob.bounds.lo < prob.bounds.hi))
    throw std::invalid_argument("control bounds must satisfy lo < hi");
  const Loads loads = make_loads(prob, sys);
  const auto& mesh = *sys.mesh;
  const int nd = sys.n_dofs();
  const double alpha = prob.alpha;

  Eigen::VectorXd u = Eigen::VectorXd::Zero(nd), p = Eigen::VectorXd::Zero(nd);
  // a few damped fixed-point sweeps to land in the Newton basin
  for (int k = 0; k < 6; ++k) {
    const Eigen::VectorXd rhs =
        projected_adjoint_load(mesh, sys.dofs, p, alpha, prob.bounds) + loads.F_e;
    auto [u_new, rep] = solve_state(sys, prob.a, rhs, 1e-12, 50, &u);
    if (!rep.converged) throw std::runtime_error("control: state solver did not converge");
    u = u_new;
    const Eigen::VectorXd p_new = adjoint_for(prob, sys, loads, u);
    p += 0.5 * (p_new - p);
  }

  OptimalTriplet t;
  t.variational = true;
  const double res_scale = 1.0 + loads.F_ud.norm() + loads.F_e.norm();
  const double tol_inner = std::min(tol_opt * 1e-3, 1e-12 * res_scale);
  auto residuals = [&](const Eigen::VectorXd& uu, const Eigen::VectorXd& pp, Eigen::VectorXd& R1,
                       Eigen::VectorXd& R2) {
    R1 = sys.A * uu - projected_adjoint_load(mesh, sys.dofs, pp, alpha, prob.bounds) - loads.F_e;
    Eigen::MatrixXd jac = sys.A;
    if (prob.a.tag != NonlinearityPreset::Tag::none) {
      auto [av, J] = assemble_semilinear(mesh, uu, prob.a);
      R1 += av;
      jac += J;
    }
    R2 = jac * pp - Eigen::VectorXd(sys.M * uu) + loads.F_ud;
    return std::sqrt(R1.squaredNorm() + R2.squaredNorm());
  };
  Eigen::VectorXd R1, R2;
  double rn = residuals(u, p, R1, R2);
  bool ok = rn <= tol_inner;
  for (int it = 0; it < 60 && !ok; ++it) {
    const Eigen::MatrixXd jac = state_jacobian(sys, prob.a, u);
    const Eigen::MatrixXd K = curvature_matrix(sys, prob.a, u, p);
    Eigen::MatrixXd M2 = Eigen::MatrixXd::Zero(2 * nd, 2 * nd);
    M2.topLeftCorner(nd, nd) = jac;
    M2.topRightCorner(nd, nd) = inactive_mass(mesh, sys.dofs, p, alpha, prob.bounds);
    M2.bottomLeftCorner(nd, nd) = K - Eigen::MatrixXd(sys.M);
    M2.bottomRightCorner(nd, nd) = jac;
    Eigen::VectorXd rhs(2 * nd);
    rhs.head(nd) = -R1;
    rhs.tail(nd) = -R2;
    const Eigen::VectorXd d = M2.partialPivLu().solve(rhs);
    double step = 1.0, rn_t = rn;
    Eigen::VectorXd u_t, p_t, R1t, R2t;
    for (int back = 0; back <= 30; ++back) {
      u_t = u + step * d.head(nd);
      p_t = p + step * d.tail(nd);
      rn_t = residuals(u_t, p_t, R1t, R2t);
      if (rn_t <= (1.0 - 0.25 * step) * rn) break;
      step *= 0.5;
    }
    u = u_t;
    p = p_t;
    R1 = R1t;
    R2 = R2t;
    rn = rn_t;
    t.outer_iterations = it + 1;
    ok = rn <= tol_inner;
  }
  t.u = u;
  t.p = p;
  t.converged = ok;
  t.fixed_point_residual = 0.0;  // z is the projection of p_h by definition
  // objective with the implicit control
  double zsq = 0.0;
  for (std::size_t e = 0; e < mesh.n_elements(); ++e)
    for_projected_quad(mesh, sys.dofs, p, alpha, prob.bounds, static_cast<int>(e),
                       [&](const Vec2& x, double w) {
                         const double z = project_box(
                             -eval_p1_dofs(mesh, sys.dofs, p, static_cast<int>(e), x) / alpha,
                             prob.bounds.lo, prob.bounds.hi);
                         zsq += w * z * z;
                       });
  t.objective = tracking_misfit(prob, sys, u) + 0.5 * alpha * zsq;
  return t;
}

OptimalityReport check_optimality(const OptimalTriplet& t, const ControlProblem& prob,
                                  const FeSystem& sys) {
  const Loads loads = make_loads(prob, sys);
  const auto& mesh = *sys.mesh;
  OptimalityReport rep;
  Eigen::VectorXd ctl_load =
      t.variational
          ? projected_adjoint_load(mesh, sys.dofs, t.p, prob.alpha, prob.bounds)
          : control_to_load(mesh, t.z_elem);
  rep.state_residual = residual(sys, prob.a, t.u, ctl_load + loads.F_e);
  Eigen::MatrixXd jac = sys.A;
  if (prob.a.tag != NonlinearityPreset::Tag::none)
    jac += assemble_semilinear(mesh, t.u, prob.a).second;
  rep.adjoint_residual =
      (jac * t.p - Eigen::VectorXd(sys.M * t.u) + loads.F_ud).norm();
  double vi_min = 0.0, fp = 0.0;
  if (t.variational) {
    for (std::size_t e = 0; e < mesh.n_elements(); ++e)
      for_projected_quad(mesh, sys.dofs, t.p, prob.alpha, prob.bounds, static_cast<int>(e),
                         [&](const Vec2& x, double) {
                           const double pv =
                               eval_p1_dofs(mesh, sys.dofs, t.p, static_cast<int>(e), x);
                           const double z = project_box(-pv / prob.alpha, prob.bounds.lo,
                                                        prob.bounds.hi);
                           const double g = pv + prob.alpha * z;
                           for (double v : {prob.bounds.lo, prob.bounds.hi})
                             vi_min = std::min(vi_min, g * (v - z));
                         });
  } else {
    for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
      const double pm = elem_mean(sys, t.p, static_cast<int>(e));
      const double g = pm + prob.alpha * t.z_elem[e];
      for (double v : {prob.bounds.lo, prob.bounds.hi})
        vi_min = std::min(vi_min, g * (v - t.z_elem[e]) * mesh.elem_measure[e]);
      fp = std::max(fp, std::abs(t.z_elem[e] - project_box(-pm / prob.alpha, prob.bounds.lo,
                                                           prob.bounds.hi)));
    }
  }
  rep.vi_violation = vi_min;
  rep.fixed_point_residual = fp;
  return rep;
}

double eval_control(const OptimalTriplet& t, const ControlProblem& prob, const FeSystem& sys,
                    const Vec2& x) {
  const auto e = sys.mesh->locate(x);
  if (!e) return 0.0;
  if (t.variational)
    return project_box(-eval_p1_dofs(*sys.mesh, sys.dofs, t.p, *e, x) / prob.alpha,
                       prob.bounds.lo, prob.bounds.hi);
  return t.z_elem[*e];
}

std::string triplet_to_json(const OptimalTriplet& t, const FeSystem& sys) {
  nlohmann::json j;
  j["scheme"] = t.variational ? "variational" : "fully_discrete";
  j["objective"] = t.objective;
  j["converged"] = t.converged;
  j["outer_iterations"] = t.outer_iterations;
  j["fixed_point_residual"] = t.fixed_point_residual;
  j["state"] = std::vector<double>(t.u.data(), t.u.data() + t.u.size());
  j["adjoint"] = std::vector<double>(t.p.data(), t.p.data() + t.p.size());
  if (!t.variational) j["control"] = t.z_elem;
  j["interior_vertices"] = sys.dofs.vertex_of_dof;
  return j.dump(2);
}

}  // namespace fracfem
