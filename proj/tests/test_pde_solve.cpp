#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "fracfem/bench.hpp"
#include "fracfem/pde_solve.hpp"

using namespace fracfem;

namespace {

FeSystem system_1d(int n_elem, double s) {
  auto mesh = std::make_shared<SimplicialMesh>(
      build_quasi_uniform(Domain::interval(-1, 1), 2.0 / n_elem));
  return make_fe_system(mesh, s, 1);
}

}  // namespace

TEST_CASE("linear solve reproduces the closed-form unit-ball solution") {
  auto sys = system_1d(512, 0.5);
  const Eigen::VectorXd F = assemble_load(*sys.mesh, [](const Vec2&) { return 1.0; });
  const auto [u, rep] = solve_state(sys, NonlinearityPreset::none(), F);
  REQUIRE(rep.converged);
  CHECK(rep.iterations <= 2);  // linear problem: one Newton step
  const auto vals = to_vertex_values(*sys.mesh, sys.dofs, u);
  // u(0) = c_{1,1/2} = 1
  CHECK(std::abs(sys.mesh->eval_p1(vals, {0, 0}) - 1.0) < 1e-2);
  // the discrete solution of a positive source stays nonnegative here
  CHECK(u.minCoeff() >= -1e-10);
}

TEST_CASE("Newton iterates are independent of the initial guess") {
  auto sys = system_1d(64, 0.6);
  const Eigen::VectorXd F = assemble_load(*sys.mesh, [](const Vec2& x) {
    return 1.0 + std::cos(2 * x[0]);
  });
  const auto preset = NonlinearityPreset::cubic(1.0);
  const auto [u0, r0] = solve_state(sys, preset, F, 1e-12);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd init(sys.n_dofs());
  for (int i = 0; i < init.size(); ++i) init[i] = dist(rng);
  const auto [u1, r1] = solve_state(sys, preset, F, 1e-12, 50, &init);
  REQUIRE(r0.converged);
  REQUIRE(r1.converged);
  CHECK((u0 - u1).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("zero source gives the zero solution for the cubic problem") {
  auto sys = system_1d(32, 0.4);
  const Eigen::VectorXd F = Eigen::VectorXd::Zero(sys.n_dofs());
  const auto [u, rep] = solve_state(sys, NonlinearityPreset::cubic(2.0), F, 1e-12);
  REQUIRE(rep.converged);
  CHECK(u.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Newton converges fast and with full steps near the solution") {
  auto sys = system_1d(128, 0.5);
  const Eigen::VectorXd F = assemble_load(*sys.mesh, [](const Vec2&) { return 2.0; });
  const auto [u, rep] = solve_state(sys, NonlinearityPreset::cubic(1.0), F, 1e-12);
  REQUIRE(rep.converged);
  CHECK(rep.iterations <= 8);
  REQUIRE(!rep.damping.empty());
  CHECK(rep.damping.back() == 1.0);  // quadratic phase accepts the full step
  CHECK(residual(sys, NonlinearityPreset::cubic(1.0), u, F) < 1e-12 * F.cwiseAbs().maxCoeff());
}

TEST_CASE("non-convergence is reported, not hidden") {
  auto sys = system_1d(16, 0.5);
  const Eigen::VectorXd F = assemble_load(*sys.mesh, [](const Vec2&) { return 1.0; });
  const auto [u, rep] = solve_state(sys, NonlinearityPreset::cubic(1.0), F, 0.0, 3);
  CHECK(!rep.converged);
}

TEST_CASE("adjoint solve matches the linearized system") {
  auto sys = system_1d(64, 0.5);
  const Eigen::VectorXd F = assemble_load(*sys.mesh, [](const Vec2&) { return 1.0; });
  const auto preset = NonlinearityPreset::cubic(0.7);
  const auto [u, rep] = solve_state(sys, preset, F, 1e-12);
  REQUIRE(rep.converged);
  Eigen::VectorXd rhs(sys.n_dofs());
  for (int i = 0; i < rhs.size(); ++i) rhs[i] = std::sin(0.5 * i);
  const Eigen::VectorXd p = solve_adjoint(sys, u, preset, rhs);
  const auto [a_vec, J] = assemble_semilinear(*sys.mesh, u, preset);
  const Eigen::VectorXd res = sys.A * p + J * p - rhs;
  CHECK(res.cwiseAbs().maxCoeff() < 1e-10 * rhs.cwiseAbs().maxCoeff());
  // with a = 0 the adjoint is just A^{-1} rhs
  const Eigen::VectorXd p0 = solve_adjoint(sys, u, NonlinearityPreset::none(), rhs);
  CHECK((sys.A * p0 - rhs).cwiseAbs().maxCoeff() < 1e-10 * rhs.cwiseAbs().maxCoeff());
}
