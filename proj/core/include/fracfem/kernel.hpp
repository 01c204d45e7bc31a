#pragma once

#include <stdexcept>

namespace fracfem {

/// Normalization constant of the integral fractional Laplacian,
/// C(n,s) = 2^{2s} s Gamma(s + n/2) / (pi^{n/2} Gamma(1-s)).
struct KernelConstant {
  int n;
  double s;
  double value;
};

KernelConstant kernel_constant(int n, double s);

/// Gamma(a)Gamma(b)/Gamma(a+b).
double beta_function(double a, double b);

/// Coefficient of the closed-form solution of (-Delta)^s u = 1 on the unit ball:
/// u(x) = c_{n,s} (1-|x|^2)^s_+ with c_{n,s} = Gamma(n/2) / (2^{2s} Gamma((n+2s)/2) Gamma(1+s)).
double ball_solution_constant(int n, double s);

/// d_{n,s} = 1/c_{n,s}, so that (-Delta)^s (1-|x|^2)^s_+ = d_{n,s} on the unit ball.
double ball_source_constant(int n, double s);

inline void require_fractional_order(double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("fractional order s must be in (0,1)");
}

}  // namespace fracfem
