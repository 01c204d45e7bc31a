#include "fracfem/kernel.hpp"

#include <cmath>

namespace fracfem {

KernelConstant kernel_constant(int n, double s) {
  require_fractional_order(s);
  if (n != 1 && n != 2) throw std::invalid_argument("kernel_constant: n must be 1 or 2");
  const double log_c = 2.0 * s * std::log(2.0) + std::log(s) + std::lgamma(s + 0.5 * n) -
                       0.5 * n * std::log(M_PI) - std::lgamma(1.0 - s);
  return {n, s, std::exp(log_c)};
}

double beta_function(double a, double b) {
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

double ball_solution_constant(int n, double s) {
  require_fractional_order(s);
  return std::exp(std::lgamma(0.5 * n) - 2.0 * s * std::log(2.0) -
                  std::lgamma(0.5 * (n + 2.0 * s)) - std::lgamma(1.0 + s));
}

double ball_source_constant(int n, double s) { return 1.0 / ball_solution_constant(n, s); }

}  // namespace fracfem
