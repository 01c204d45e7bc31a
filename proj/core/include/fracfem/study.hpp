#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracfem/bench.hpp"

namespace fracfem {

/// Invalid or inconsistent configuration; message is anchored to the config
/// line / JSON pointer that caused it. Maps to exit code 2 in the CLI.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A solver failed to converge; maps to exit code 3 (partial table still written).
struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StudyConfig {
  // problem block (no defaults for s, alpha, bounds: studies are self-describing)
  int n = 1;
  double s = -1.0;
  Domain domain;
  std::string benchmark;  // getoor | manufactured_semilinear | manufactured_control |
                          // constant_source | control_tracking
  NonlinearityPreset preset = NonlinearityPreset::none();
  double lambda = 1.0;
  std::optional<double> alpha;
  std::optional<ControlBounds> bounds;
  std::string target = "sine";  // control_tracking target shape

  // discretization block
  std::string scheme = "state_only";  // state_only | fully_discrete | variational
  std::string mesh_family = "quasi_uniform";
  double mu = 1.0;
  std::vector<double> h_list;  // strictly decreasing
  // Benchmarks without a closed-form solution measure errors either against
  // the next finer row ("difference", default; the last row carries no error)
  // or against one overkill solve on a reference_factor-finer mesh ("reference").
  std::string error_mode = "difference";
  double reference_factor = 4.0;

  // tolerances
  double tol_newton = 1e-10;
  double tol_opt = 1e-9;
  QuadOrders quad_orders;

  int workers = 1;
  std::uint64_t seed = 0;
  bool multistart = false;  // log (never assert) agreement of 3 random control inits

  bool is_control() const { return scheme != "state_only"; }

  /// Parse + validate. Throws ConfigError with a line-anchored message.
  static StudyConfig from_json_text(const std::string& text);
  std::string to_json() const;
};

struct StudyResult {
  ErrorTable table;
  std::string report_json;
  bool all_converged = true;
};

/// One row per h, coarse to fine, sequentially (workers parallelize assembly
/// within a row). On solver failure the rows computed so far are kept and
/// all_converged is false.
StudyResult run_study(const StudyConfig& cfg);

struct SingleResult {
  ErrorRow row;
  std::string solution_json;
  bool converged = true;
};

SingleResult run_single(const StudyConfig& cfg, double h);

}  // namespace fracfem
