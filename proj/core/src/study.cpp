#include "fracfem/study.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include <nlohmann/json.hpp>

namespace fracfem {

namespace {

using nlohmann::json;

// best-effort line anchor: first line mentioning the key
int key_line(const std::string& text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  if (pos == std::string::npos) return 1;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + pos, '\n'));
}

int offset_line(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + byte, '\n'));
}

[[noreturn]] void fail(const std::string& text, const std::string& key, const std::string& what) {
  throw ConfigError("config line " + std::to_string(key_line(text, key)) + ": " + what);
}

const json* find(const json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double require_number(const std::string& text, const json& j, const char* key,
                      const std::string& ctx) {
  const json* v = find(j, key);
  if (!v || !v->is_number()) fail(text, key, ctx + ": '" + key + "' must be a number");
  return v->get<double>();
}

struct BenchSetup {
  std::function<double(const Vec2&)> f;
  bool f_singular = false;
  std::function<double(const Vec2&)> u_exact;
  double energy_sq = 0.0;
  bool has_energy = false;
  double source_const = 0.0;
  bool has_source_const = false;
  std::optional<ControlBenchmark> cb;
  std::optional<ControlProblem> tracking;
  bool needs_reference = false;
};

BenchSetup make_setup(const StudyConfig& cfg) {
  BenchSetup s;
  if (cfg.benchmark == "getoor" || cfg.benchmark == "manufactured_semilinear") {
    ExactSolution ex = cfg.benchmark == "getoor"
                           ? getoor(cfg.n, cfg.s)
                           : manufactured_semilinear(cfg.n, cfg.s, cfg.lambda, cfg.preset);
    s.f = ex.f;
    s.f_singular = ex.f_singular;
    s.u_exact = ex.u;
    s.energy_sq = ex.energy_sq;
    s.has_energy = ex.has_energy;
    s.source_const = cfg.benchmark == "getoor"
                         ? 1.0
                         : cfg.lambda * getoor_inverse_constant(cfg.n, cfg.s);
    s.has_source_const = true;
  } else if (cfg.benchmark == "constant_source") {
    s.f = [](const Vec2&) { return 1.0; };
    s.needs_reference = true;
  } else if (cfg.benchmark == "manufactured_control") {
    s.cb = manufactured_control(cfg.n, cfg.s, *cfg.alpha, cfg.bounds->lo, cfg.bounds->hi,
                                cfg.preset);
    s.u_exact = s.cb->u_exact;
  } else if (cfg.benchmark == "control_tracking") {
    ControlProblem prob;
    prob.a = cfg.preset;
    prob.alpha = *cfg.alpha;
    prob.bounds = *cfg.bounds;
    if (cfg.target == "sine") {
      if (cfg.n == 1)
        prob.u_d = [](const Vec2& x) { return std::sin(M_PI * x[0]); };
      else
        prob.u_d = [](const Vec2& x) {
          return std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]);
        };
    } else {  // "constant"
      prob.u_d = [](const Vec2&) { return 1.0; };
    }
    s.tracking = prob;
    s.needs_reference = true;
  } else {
    throw ConfigError("config line 1: unknown benchmark '" + cfg.benchmark + "'");
  }
  return s;
}

SimplicialMesh make_mesh(const StudyConfig& cfg, double h) {
  if (cfg.mesh_family == "graded") return build_graded(cfg.domain, GradingSpec{h, cfg.mu, 1.0});
  return build_quasi_uniform(cfg.domain, h);
}

struct RefData {
  bool has = false;
  std::shared_ptr<SimplicialMesh> mesh;
  DofMap dofs;
  std::vector<double> u_vals;   // state values at reference vertices
  double energy_sq = 0.0;       // |||u_ref|||^2
  std::function<double(const Vec2&)> u_fn, z_fn;
  double build_seconds = 0.0;
  int n_dofs = 0;
};

RefData build_reference(const StudyConfig& cfg, const BenchSetup& setup) {
  RefData ref;
  const auto t0 = std::chrono::steady_clock::now();
  const double h_ref = cfg.h_list.back() / cfg.reference_factor;
  ref.mesh = std::make_shared<SimplicialMesh>(make_mesh(cfg, h_ref));
  auto sys = make_fe_system(ref.mesh, cfg.s, cfg.workers, cfg.quad_orders);
  ref.dofs = sys.dofs;
  ref.n_dofs = sys.n_dofs();
  if (setup.tracking) {
    const ControlProblem prob = *setup.tracking;
    OptimalTriplet t = cfg.scheme == "variational" ? solve_variational(prob, sys, cfg.tol_opt)
                                                   : solve_fully_discrete(prob, sys, cfg.tol_opt);
    if (!t.converged) throw NonConvergence("reference control solve did not converge");
    ref.u_vals = to_vertex_values(*ref.mesh, sys.dofs, t.u);
    auto mesh = ref.mesh;
    if (t.variational) {
      auto p_vals = to_vertex_values(*ref.mesh, sys.dofs, t.p);
      const double alpha = prob.alpha;
      const ControlBounds b = prob.bounds;
      ref.z_fn = [mesh, p_vals, alpha, b](const Vec2& x) {
        return project_box(-mesh->eval_p1(p_vals, x) / alpha, b.lo, b.hi);
      };
    } else {
      auto z = t.z_elem;
      ref.z_fn = [mesh, z](const Vec2& x) {
        const auto e = mesh->locate(x);
        return e ? z[*e] : 0.0;
      };
    }
  } else {
    const Eigen::VectorXd F = assemble_load(*ref.mesh, setup.f, setup.f_singular);
    auto [u, rep] = solve_state(sys, cfg.preset, F, cfg.tol_newton);
    if (!rep.converged) throw NonConvergence("reference state solve did not converge");
    ref.energy_sq = energy_sq_discrete(sys, u);
    ref.u_vals = to_vertex_values(*ref.mesh, sys.dofs, u);
  }
  if (!ref.u_vals.empty()) {
    auto mesh = ref.mesh;
    auto vals = ref.u_vals;
    ref.u_fn = [mesh, vals](const Vec2& x) { return mesh->eval_p1(vals, x); };
  }
  ref.build_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ref.has = true;
  return ref;
}

ErrorRow compute_row(const StudyConfig& cfg, const BenchSetup& setup, const RefData& ref,
                     double h, OptimalTriplet* triplet_out = nullptr,
                     Eigen::VectorXd* state_out = nullptr, json* extra = nullptr,
                     FeSystem* sys_out = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  auto mesh = std::make_shared<SimplicialMesh>(make_mesh(cfg, h));
  auto sys = make_fe_system(mesh, cfg.s, cfg.workers, cfg.quad_orders);
  ErrorRow row;
  row.h = h;
  row.n_dofs = sys.n_dofs();

  if (!cfg.is_control()) {
    const Eigen::VectorXd F = assemble_load(*mesh, setup.f, setup.f_singular);
    auto [u, rep] = solve_state(sys, cfg.preset, F, cfg.tol_newton);
    row.newton_iters = rep.iterations;
    row.max_abs_u = rep.max_abs_u;
    if (!rep.converged)
      throw NonConvergence("state solver did not converge at h = " + std::to_string(h));
    const auto vals = to_vertex_values(*mesh, sys.dofs, u);
    if (setup.u_exact)
      row.e_l2 = error_l2(*mesh, vals, setup.u_exact);
    else if (ref.u_fn)
      row.e_l2 = error_l2(*mesh, vals, ref.u_fn);
    if (setup.has_energy && setup.has_source_const)
      row.e_energy = energy_error_ball_source(setup.energy_sq, setup.source_const, sys, u);
    else if (ref.has)
      row.e_energy = energy_error_identity(ref.energy_sq, sys, u);
    if (state_out) *state_out = u;
  } else {
    const ControlProblem& prob = setup.cb ? setup.cb->prob : *setup.tracking;
    OptimalTriplet t = cfg.scheme == "variational" ? solve_variational(prob, sys, cfg.tol_opt)
                                                   : solve_fully_discrete(prob, sys, cfg.tol_opt);
    row.newton_iters = t.outer_iterations;
    row.max_abs_u = t.u.size() ? t.u.cwiseAbs().maxCoeff() : 0.0;
    if (!t.converged)
      throw NonConvergence("control solver did not converge at h = " + std::to_string(h));
    const auto& z_exact = setup.cb ? setup.cb->z_exact : ref.z_fn;
    if (z_exact) row.e_ctrl = error_control_l2(t, prob, sys, z_exact);
    if (setup.u_exact)
      row.e_l2 = error_l2(*mesh, to_vertex_values(*mesh, sys.dofs, t.u), setup.u_exact);
    else if (ref.u_fn)
      row.e_l2 = error_l2(*mesh, to_vertex_values(*mesh, sys.dofs, t.u), ref.u_fn);
    if (extra && cfg.multistart && cfg.scheme == "fully_discrete") {
      // agreement of random admissible starts is logged, never asserted
      std::mt19937_64 rng(cfg.seed);
      std::uniform_real_distribution<double> dist(prob.bounds.lo, prob.bounds.hi);
      json runs = json::array();
      runs.push_back(t.objective);
      for (int k = 0; k < 2; ++k) {
        std::vector<double> z0(mesh->n_elements());
        for (auto& v : z0) v = dist(rng);
        OptimalTriplet tk = solve_fully_discrete(prob, sys, cfg.tol_opt, &z0);
        runs.push_back(tk.objective);
      }
      (*extra)["multistart_objectives"] = runs;
    }
    if (triplet_out) *triplet_out = std::move(t);
  }
  row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (sys_out) *sys_out = std::move(sys);
  return row;
}

}  // namespace

StudyConfig StudyConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config line " + std::to_string(offset_line(text, e.byte)) +
                      ": JSON parse error: " + e.what());
  }
  StudyConfig cfg;
  const json* pb = find(j, "problem");
  if (!pb || !pb->is_object()) fail(text, "problem", "missing 'problem' block");
  const json* db = find(j, "discretization");
  if (!db || !db->is_object()) fail(text, "discretization", "missing 'discretization' block");

  cfg.n = static_cast<int>(require_number(text, *pb, "n", "problem"));
  if (cfg.n != 1 && cfg.n != 2) fail(text, "n", "problem: n must be 1 or 2");
  cfg.s = require_number(text, *pb, "s", "problem");
  if (!(cfg.s > 0.0 && cfg.s < 1.0)) fail(text, "s", "problem: s must lie in (0,1)");

  const json* dom = find(*pb, "domain");
  if (!dom || !dom->is_object() || !dom->contains("type"))
    fail(text, "domain", "problem: 'domain' must be an object with a 'type'");
  const std::string dtype = (*dom)["type"].get<std::string>();
  if (dtype == "interval") {
    if (cfg.n != 1) fail(text, "domain", "interval domain requires n = 1");
    const double a = require_number(text, *dom, "a", "domain");
    const double b = require_number(text, *dom, "b", "domain");
    if (!(a < b)) fail(text, "domain", "interval endpoints must satisfy a < b");
    cfg.domain = Domain::interval(a, b);
  } else if (dtype == "unit_square") {
    if (cfg.n != 2) fail(text, "domain", "unit_square domain requires n = 2");
    cfg.domain = Domain::unit_square();
  } else if (dtype == "polygon") {
    if (cfg.n != 2) fail(text, "domain", "polygon domain requires n = 2");
    const json* vs = find(*dom, "vertices");
    if (!vs || !vs->is_array() || vs->size() < 3)
      fail(text, "vertices", "polygon needs >= 3 vertices");
    std::vector<Vec2> pts;
    for (const auto& p : *vs) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    cfg.domain = Domain::make_polygon(std::move(pts));
  } else {
    fail(text, "domain", "unknown domain type '" + dtype + "'");
  }

  const json* bm = find(*pb, "benchmark");
  if (!bm || !bm->is_string()) fail(text, "benchmark", "problem: 'benchmark' must be a string");
  cfg.benchmark = bm->get<std::string>();

  if (const json* nl = find(*pb, "nonlinearity")) {
    const std::string t = nl->value("type", "none");
    if (t == "none")
      cfg.preset = NonlinearityPreset::none();
    else if (t == "linear")
      cfg.preset = NonlinearityPreset::linear(require_number(text, *nl, "c", "nonlinearity"));
    else if (t == "cubic")
      cfg.preset = NonlinearityPreset::cubic(require_number(text, *nl, "c", "nonlinearity"));
    else
      fail(text, "nonlinearity", "unknown nonlinearity type '" + t + "'");
    if (cfg.preset.c < 0.0) fail(text, "nonlinearity", "nonlinearity must be monotone (c >= 0)");
  }
  if (const json* lm = find(*pb, "lambda")) cfg.lambda = lm->get<double>();
  if (const json* al = find(*pb, "alpha")) cfg.alpha = al->get<double>();
  if (const json* cb = find(*pb, "control_bounds")) {
    if (!cb->is_array() || cb->size() != 2)
      fail(text, "control_bounds", "control_bounds must be [lo, hi]");
    cfg.bounds = ControlBounds{(*cb)[0].get<double>(), (*cb)[1].get<double>()};
    if (!(cfg.bounds->lo < cfg.bounds->hi))
      fail(text, "control_bounds", "control bounds must satisfy lo < hi");
  }
  if (const json* tg = find(*pb, "target")) cfg.target = tg->get<std::string>();

  const json* sc = find(*db, "scheme");
  if (!sc || !sc->is_string()) fail(text, "scheme", "discretization: 'scheme' must be a string");
  cfg.scheme = sc->get<std::string>();
  if (cfg.scheme != "state_only" && cfg.scheme != "fully_discrete" &&
      cfg.scheme != "variational")
    fail(text, "scheme", "unknown scheme '" + cfg.scheme + "'");
  if (cfg.is_control()) {
    if (!cfg.alpha) fail(text, "alpha", "control schemes require 'alpha' (no default)");
    if (!(*cfg.alpha > 0.0)) fail(text, "alpha", "alpha must be positive");
    if (!cfg.bounds) fail(text, "control_bounds", "control schemes require 'control_bounds'");
  }

  if (const json* mb = find(*db, "mesh")) {
    cfg.mesh_family = mb->value("family", "quasi_uniform");
    if (cfg.mesh_family != "quasi_uniform" && cfg.mesh_family != "graded")
      fail(text, "family", "mesh family must be quasi_uniform or graded");
    if (cfg.mesh_family == "graded") {
      cfg.mu = require_number(text, *mb, "mu", "mesh");
      if (!(cfg.mu >= 1.0)) fail(text, "mu", "grading exponent mu must be >= 1");
    }
  }
  const json* hl = find(*db, "h");
  if (!hl || !hl->is_array() || hl->empty())
    fail(text, "h", "discretization: 'h' must be a non-empty array");
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& v : *hl) {
    const double h = v.get<double>();
    if (!(h > 0.0) || !(h < prev))
      fail(text, "h", "h-list must be positive and strictly decreasing");
    cfg.h_list.push_back(h);
    prev = h;
  }
  if (const json* rf = find(*db, "reference_factor")) {
    cfg.reference_factor = rf->get<double>();
    if (!(cfg.reference_factor > 1.0))
      fail(text, "reference_factor", "reference_factor must exceed 1");
  }
  if (const json* em = find(*db, "error_mode")) {
    cfg.error_mode = em->get<std::string>();
    if (cfg.error_mode != "difference" && cfg.error_mode != "reference")
      fail(text, "error_mode", "error_mode must be difference or reference");
  }

  if (const json* tol = find(j, "tolerances")) {
    cfg.tol_newton = tol->value("newton", cfg.tol_newton);
    cfg.tol_opt = tol->value("optimizer", cfg.tol_opt);
  }
  if (const json* w = find(j, "workers")) {
    cfg.workers = w->get<int>();
    if (cfg.workers < 1) fail(text, "workers", "workers must be >= 1");
  }
  if (const json* sd = find(j, "seed")) cfg.seed = sd->get<std::uint64_t>();
  if (const json* ms = find(j, "multistart")) cfg.multistart = ms->get<bool>();

  if (cfg.benchmark != "getoor" && cfg.benchmark != "manufactured_semilinear" &&
      cfg.benchmark != "constant_source" && cfg.benchmark != "manufactured_control" &&
      cfg.benchmark != "control_tracking")
    fail(text, "benchmark", "unknown benchmark '" + cfg.benchmark + "'");
  if (cfg.benchmark == "manufactured_control") {
    if (!cfg.is_control())
      fail(text, "benchmark", "manufactured_control requires a control scheme");
    if (cfg.n != 1) fail(text, "benchmark", "manufactured_control is defined for n = 1");
    if (!(cfg.bounds->lo < 0.0 && cfg.bounds->hi > 0.0))
      fail(text, "control_bounds", "manufactured_control requires lo < 0 < hi");
  }
  if (cfg.benchmark == "control_tracking" && !cfg.is_control())
    fail(text, "benchmark", "control_tracking requires a control scheme");
  if ((cfg.benchmark == "getoor" || cfg.benchmark == "manufactured_semilinear" ||
       cfg.benchmark == "constant_source") &&
      cfg.is_control())
    fail(text, "scheme", "benchmark '" + cfg.benchmark + "' is a state problem");
  return cfg;
}

std::string StudyConfig::to_json() const {
  json j;
  j["problem"]["n"] = n;
  j["problem"]["s"] = s;
  if (n == 1) {
    j["problem"]["domain"] = {{"type", "interval"}, {"a", domain.a}, {"b", domain.b}};
  } else {
    json vs = json::array();
    for (const auto& p : domain.polygon) vs.push_back({p[0], p[1]});
    j["problem"]["domain"] = {{"type", "polygon"}, {"vertices", vs}};
  }
  j["problem"]["benchmark"] = benchmark;
  const char* ptag = preset.tag == NonlinearityPreset::Tag::none
                         ? "none"
                         : (preset.tag == NonlinearityPreset::Tag::linear ? "linear" : "cubic");
  j["problem"]["nonlinearity"] = {{"type", ptag}, {"c", preset.c}};
  j["problem"]["lambda"] = lambda;
  if (alpha) j["problem"]["alpha"] = *alpha;
  if (bounds) j["problem"]["control_bounds"] = {bounds->lo, bounds->hi};
  j["problem"]["target"] = target;
  j["discretization"]["scheme"] = scheme;
  j["discretization"]["mesh"] = {{"family", mesh_family}, {"mu", mu}};
  j["discretization"]["h"] = h_list;
  j["discretization"]["error_mode"] = error_mode;
  j["discretization"]["reference_factor"] = reference_factor;
  j["tolerances"] = {{"newton", tol_newton}, {"optimizer", tol_opt}};
  j["workers"] = workers;
  j["seed"] = seed;
  j["multistart"] = multistart;
  return j.dump(2);
}

StudyResult run_study(const StudyConfig& cfg) {
  const BenchSetup setup = make_setup(cfg);
  StudyResult res;
  res.table.n = cfg.n;
  res.table.s = cfg.s;
  res.table.mu = cfg.mesh_family == "graded" ? cfg.mu : 1.0;
  res.table.scheme = cfg.scheme;
  res.table.preset = cfg.preset.tag == NonlinearityPreset::Tag::none
                         ? "none"
                         : (cfg.preset.tag == NonlinearityPreset::Tag::linear ? "linear"
                                                                              : "cubic");
  res.table.benchmark = cfg.benchmark;

  json report;
  report["config"] = json::parse(cfg.to_json());
  std::string failure;

  const bool diff_mode = setup.needs_reference && cfg.error_mode == "difference";
  RefData ref;
  if (setup.needs_reference && !diff_mode) {
    try {
      ref = build_reference(cfg, setup);
      report["reference"] = {{"h", cfg.h_list.back() / cfg.reference_factor},
                             {"N", ref.n_dofs},
                             {"runtime_s", ref.build_seconds}};
    } catch (const NonConvergence& e) {
      res.all_converged = false;
      failure = e.what();
    }
  }

  json extra;
  if (res.all_converged) {
    // rows run coarse to fine; within a row the assembly uses the worker pool.
    // In difference mode each new row retroactively supplies the error of the
    // previous one, so the finest row keeps nan errors.
    FeSystem prev_sys;
    std::vector<double> prev_vals;
    double prev_energy = 0.0;
    OptimalTriplet prev_t;
    bool have_prev = false;
    for (std::size_t k = 0; k < cfg.h_list.size(); ++k) {
      try {
        json* ex = k == 0 ? &extra : nullptr;
        OptimalTriplet t;
        Eigen::VectorXd u;
        FeSystem sys;
        res.table.rows.push_back(compute_row(cfg, setup, ref, cfg.h_list[k], &t, &u, ex,
                                             diff_mode ? &sys : nullptr));
        if (!diff_mode) continue;
        std::vector<double> vals =
            to_vertex_values(*sys.mesh, sys.dofs, cfg.is_control() ? t.u : u);
        const double energy = cfg.is_control() ? 0.0 : energy_sq_discrete(sys, u);
        if (have_prev) {
          ErrorRow& prow = res.table.rows[res.table.rows.size() - 2];
          auto mesh = sys.mesh;
          auto fine_vals = vals;
          auto u_fn = [mesh, fine_vals](const Vec2& x) { return mesh->eval_p1(fine_vals, x); };
          prow.e_l2 = error_l2(*prev_sys.mesh, prev_vals, u_fn, /*boundary_singular=*/false);
          if (!cfg.is_control()) {
            // Galerkin identity: |||u_H - u_h|||^2 ~ |||u_h|||^2 - |||u_H|||^2
            prow.e_energy = std::sqrt(std::max(energy - prev_energy, 0.0));
          } else {
            const ControlProblem& prob = *setup.tracking;
            std::function<double(const Vec2&)> z_fn;
            if (t.variational) {
              auto p_vals = to_vertex_values(*sys.mesh, sys.dofs, t.p);
              const double alpha = prob.alpha;
              const ControlBounds b = prob.bounds;
              z_fn = [mesh, p_vals, alpha, b](const Vec2& x) {
                return project_box(-mesh->eval_p1(p_vals, x) / alpha, b.lo, b.hi);
              };
            } else {
              auto z = t.z_elem;
              z_fn = [mesh, z](const Vec2& x) {
                const auto e = mesh->locate(x);
                return e ? z[*e] : 0.0;
              };
            }
            prow.e_ctrl = error_control_l2(prev_t, prob, prev_sys, z_fn);
          }
        }
        prev_sys = std::move(sys);
        prev_vals = std::move(vals);
        prev_energy = energy;
        prev_t = std::move(t);
        have_prev = true;
      } catch (const NonConvergence& e) {
        res.all_converged = false;
        failure = e.what();
        break;
      }
    }
  }

  report["table"] = json::parse(res.table.to_json());
  if (!extra.is_null()) report.update(extra);
  report["all_converged"] = res.all_converged;
  if (!failure.empty()) report["failure"] = failure;
  res.report_json = report.dump(2);
  return res;
}

SingleResult run_single(const StudyConfig& cfg, double h) {
  const BenchSetup setup = make_setup(cfg);
  RefData ref;  // single solves never build a reference; errors may be absent
  SingleResult out;
  OptimalTriplet triplet;
  Eigen::VectorXd state;
  FeSystem sys;
  try {
    out.row = compute_row(cfg, setup, ref, h, &triplet, &state, nullptr, &sys);
  } catch (const NonConvergence&) {
    out.converged = false;
    return out;
  }
  json j;
  j["h"] = h;
  j["N"] = out.row.n_dofs;
  j["scheme"] = cfg.scheme;
  if (cfg.is_control()) {
    const ControlProblem& prob = setup.cb ? setup.cb->prob : *setup.tracking;
    (void)prob;
    j["triplet"] = json::parse(triplet_to_json(triplet, sys));
  } else {
    j["u"] = std::vector<double>(state.data(), state.data() + state.size());
    j["interior_vertices"] = sys.dofs.vertex_of_dof;
  }
  j["mesh"] = json::parse(sys.mesh->to_json());
  out.solution_json = j.dump(2);
  return out;
}

}  // namespace fracfem
