#include "fracfem/bench.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "fracfem/element_quad.hpp"
#include "fracfem/kernel.hpp"

#include <nlohmann/json.hpp>

namespace fracfem {

namespace {

double sq(double v) { return v * v; }

// \int_{B(0,1)} (1-|x|^2)^s dx
double ball_profile_integral(int n, double s) {
  if (n == 1) return std::sqrt(M_PI) * std::exp(std::lgamma(s + 1.0) - std::lgamma(s + 1.5));
  return M_PI / (s + 1.0);
}

double profile(double s, const Vec2& x) {
  const double r2 = dot(x, x);
  return r2 < 1.0 ? std::pow(1.0 - r2, s) : 0.0;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ExactSolution getoor(int n, double s) {
  require_fractional_order(s);
  const double c = ball_solution_constant(n, s);
  ExactSolution e;
  e.u = [c, s](const Vec2& x) { return c * profile(s, x); };
  e.f = [](const Vec2&) { return 1.0; };
  e.f_singular = false;
  e.energy_sq = c * ball_profile_integral(n, s);  // = \int f u
  e.has_energy = true;
  e.tag = "getoor";
  return e;
}

double getoor_inverse_constant(int n, double s) { return ball_source_constant(n, s); }

ExactSolution manufactured_semilinear(int n, double s, double lambda,
                                      const NonlinearityPreset& preset) {
  require_fractional_order(s);
  const double d = ball_source_constant(n, s);
  ExactSolution e;
  e.u = [lambda, s](const Vec2& x) { return lambda * profile(s, x); };
  e.f = [lambda, d, s, preset](const Vec2& x) {
    return lambda * d + preset.value(lambda * profile(s, x));
  };
  e.f_singular = preset.tag != NonlinearityPreset::Tag::none && lambda != 0.0;
  // A(u,u) = \int (f - a(u)) u = lambda d \int u
  e.energy_sq = lambda * lambda * d * ball_profile_integral(n, s);
  e.has_energy = true;
  e.tag = "manufactured_semilinear";
  return e;
}

ControlBenchmark manufactured_control(int n, double s, double alpha, double lo, double hi,
                                      const NonlinearityPreset& preset) {
  require_fractional_order(s);
  if (n != 1)
    throw std::invalid_argument(
        "manufactured_control: closed-form triplet available for n = 1 only; use an "
        "overkill-reference study in 2D");
  if (!(lo < 0.0 && 0.0 < hi))
    throw std::invalid_argument("manufactured_control requires lo < 0 < hi");
  if (!(alpha > 0.0)) throw std::invalid_argument("manufactured_control requires alpha > 0");

  const double c = ball_solution_constant(1, s);
  const double lam_u = 1.0;
  const double lam_p = -2.0 * alpha * hi / c;  // -pbar/alpha = 2 hi (1-x^2)^s, plateau at hi

  ControlBenchmark b;
  b.lambda_u = lam_u;
  b.lambda_p = lam_p;
  b.tag = "manufactured_control";
  b.u_exact = [c, s, lam_u](const Vec2& x) { return lam_u * c * profile(s, x); };
  b.p_exact = [c, s, lam_p](const Vec2& x) { return lam_p * c * profile(s, x); };
  auto z_exact = [s, lo, hi](const Vec2& x) {
    return project_box(2.0 * hi * profile(s, x), lo, hi);
  };
  b.z_exact = z_exact;

  b.prob.a = preset;
  b.prob.alpha = alpha;
  b.prob.bounds = {lo, hi};
  auto ubar = b.u_exact;
  auto pbar = b.p_exact;
  b.prob.extra_source = [lam_u, preset, ubar, z_exact](const Vec2& x) {
    return lam_u + preset.value(ubar(x)) - z_exact(x);
  };
  b.prob.extra_source_singular = true;
  b.prob.u_d = [lam_p, preset, ubar, pbar](const Vec2& x) {
    return ubar(x) - lam_p - preset.deriv(ubar(x)) * pbar(x);
  };
  b.prob.u_d_singular = true;
  return b;
}

double error_l2(const SimplicialMesh& mesh, const std::vector<double>& vertex_values,
                const std::function<double(const Vec2&)>& exact, bool boundary_singular,
                int degree) {
  if (vertex_values.size() != mesh.vertices.size())
    throw std::invalid_argument("error_l2: field must have one value per vertex");
  double total = 0.0;
  const int nv = mesh.n_vertices_per_elem();
  for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
    auto f = [&](const Vec2& x) {
      const auto lam = barycentric(mesh, static_cast<int>(e), x);
      double fh = 0.0;
      for (int a = 0; a < nv; ++a) fh += lam[a] * vertex_values[mesh.elements[e][a]];
      return sq(fh - exact(x));
    };
    total += boundary_singular ? integrate_element_graded(mesh, static_cast<int>(e), f, degree)
                               : integrate_element(mesh, static_cast<int>(e), f, degree);
  }
  return std::sqrt(total);
}

std::vector<double> to_vertex_values(const SimplicialMesh& mesh, const DofMap& dofs,
                                     const Eigen::VectorXd& u) {
  std::vector<double> v(mesh.vertices.size(), 0.0);
  for (int i = 0; i < dofs.n_dofs(); ++i) v[dofs.vertex_of_dof[i]] = u[i];
  return v;
}

double energy_sq_discrete(const FeSystem& sys, const Eigen::VectorXd& u) {
  return u.dot(sys.A * u);
}

double energy_error_identity(double energy_sq, const FeSystem& sys, const Eigen::VectorXd& u) {
  const double diff = energy_sq - energy_sq_discrete(sys, u);
  if (diff < -1e-10 * std::max(1.0, std::abs(energy_sq)))
    throw std::runtime_error(
        "energy_error_identity: discrete energy exceeds the exact one; inconsistent quadrature");
  return std::sqrt(std::max(diff, 0.0));
}

double energy_error_ball_source(double energy_sq, double source_const, const FeSystem& sys,
                                const Eigen::VectorXd& u) {
  const auto& mesh = *sys.mesh;
  const int nv = mesh.n_vertices_per_elem();
  double int_uh = 0.0;  // \int u_h = sum_i u_i \int phi_i
  for (std::size_t e = 0; e < mesh.n_elements(); ++e)
    for (int a = 0; a < nv; ++a) {
      const int i = sys.dofs.dof_of_vertex[mesh.elements[e][a]];
      if (i >= 0) int_uh += u[i] * mesh.elem_measure[e] / nv;
    }
  const double err_sq = energy_sq - 2.0 * source_const * int_uh + energy_sq_discrete(sys, u);
  if (err_sq < -1e-10 * std::max(1.0, std::abs(energy_sq)))
    throw std::runtime_error(
        "energy_error_ball_source: negative squared error; inconsistent quadrature");
  return std::sqrt(std::max(err_sq, 0.0));
}

double energy_error_reference(const FeSystem& ref_sys, const Eigen::VectorXd& u_ref,
                              const SimplicialMesh& coarse_mesh, const DofMap& coarse_dofs,
                              const Eigen::VectorXd& u_coarse) {
  const auto coarse_vals = to_vertex_values(coarse_mesh, coarse_dofs, u_coarse);
  Eigen::VectorXd e(ref_sys.n_dofs());
  for (int i = 0; i < ref_sys.n_dofs(); ++i) {
    const Vec2 x = ref_sys.mesh->vertices[ref_sys.dofs.vertex_of_dof[i]];
    e[i] = coarse_mesh.eval_p1(coarse_vals, x) - u_ref[i];
  }
  return std::sqrt(std::max(e.dot(ref_sys.A * e), 0.0));
}

double error_control_l2(const OptimalTriplet& t, const ControlProblem& prob, const FeSystem& sys,
                        const std::function<double(const Vec2&)>& z_exact, int degree) {
  const auto& mesh = *sys.mesh;
  double total = 0.0;
  const auto p_vals =
      t.variational ? to_vertex_values(mesh, sys.dofs, t.p) : std::vector<double>();
  for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
    auto f = [&](const Vec2& x) {
      double zh;
      if (t.variational) {
        const auto lam = barycentric(mesh, static_cast<int>(e), x);
        double ph = 0.0;
        for (int a = 0; a < mesh.n_vertices_per_elem(); ++a)
          ph += lam[a] * p_vals[mesh.elements[e][a]];
        zh = project_box(-ph / prob.alpha, prob.bounds.lo, prob.bounds.hi);
      } else {
        zh = t.z_elem[e];
      }
      return sq(zh - z_exact(x));
    };
    total += integrate_element_graded(mesh, static_cast<int>(e), f, degree);
  }
  return std::sqrt(total);
}

std::vector<double> eoc(const std::vector<double>& h, const std::vector<double>& err) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> out(h.size(), nan);
  for (std::size_t k = 1; k < h.size() && k < err.size(); ++k) {
    if (!(err[k - 1] > 0.0) || !(err[k] > 0.0) || !(h[k] < h[k - 1])) continue;
    out[k] = std::log(err[k - 1] / err[k]) / std::log(h[k - 1] / h[k]);
  }
  return out;
}

std::vector<double> eoc_log_corrected(const std::vector<double>& h,
                                      const std::vector<double>& err, double q) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> out(h.size(), nan);
  for (std::size_t k = 1; k < h.size() && k < err.size(); ++k) {
    if (!(err[k - 1] > 0.0) || !(err[k] > 0.0) || !(h[k] < h[k - 1])) continue;
    const double dlh = std::log(h[k - 1] / h[k]);
    const double dll = std::log(std::abs(std::log(h[k - 1])) / std::abs(std::log(h[k])));
    out[k] = (std::log(err[k - 1] / err[k]) - q * dll) / dlh;
  }
  return out;
}

std::string ErrorTable::to_csv() const {
  std::vector<double> hs, el2, een, ect;
  for (const auto& r : rows) {
    hs.push_back(r.h);
    el2.push_back(r.e_l2);
    een.push_back(r.e_energy);
    ect.push_back(r.e_ctrl);
  }
  const auto r2 = eoc(hs, el2), ren = eoc(hs, een), rct = eoc(hs, ect);
  std::ostringstream os;
  os << "h,N,e_L2,EOC_L2,e_energy,EOC_energy,e_ctrl,EOC_ctrl\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    os << fmt17(rows[k].h) << ',' << rows[k].n_dofs << ',' << fmt17(el2[k]) << ','
       << fmt17(r2[k]) << ',' << fmt17(een[k]) << ',' << fmt17(ren[k]) << ',' << fmt17(ect[k])
       << ',' << fmt17(rct[k]) << '\n';
  }
  return os.str();
}

std::string ErrorTable::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["s"] = s;
  j["mu"] = mu;
  j["scheme"] = scheme;
  j["preset"] = preset;
  j["benchmark"] = benchmark;
  std::vector<double> hs, el2, een, ect;
  for (const auto& r : rows) {
    hs.push_back(r.h);
    el2.push_back(r.e_l2);
    een.push_back(r.e_energy);
    ect.push_back(r.e_ctrl);
  }
  const auto r2 = eoc(hs, el2), ren = eoc(hs, een), rct = eoc(hs, ect);
  auto num = [](double v) -> nlohmann::json {
    if (std::isnan(v)) return nullptr;
    return v;
  };
  j["rows"] = nlohmann::json::array();
  for (std::size_t k = 0; k < rows.size(); ++k) {
    nlohmann::json row;
    row["h"] = rows[k].h;
    row["N"] = rows[k].n_dofs;
    row["e_L2"] = num(el2[k]);
    row["EOC_L2"] = num(r2[k]);
    row["e_energy"] = num(een[k]);
    row["EOC_energy"] = num(ren[k]);
    row["e_ctrl"] = num(ect[k]);
    row["EOC_ctrl"] = num(rct[k]);
    row["newton_iters"] = rows[k].newton_iters;
    row["max_abs_u"] = rows[k].max_abs_u;
    row["runtime_s"] = rows[k].runtime_s;
    j["rows"].push_back(row);
  }
  return j.dump(2);
}

}  // namespace fracfem
