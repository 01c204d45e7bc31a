#include <doctest.h>

#include <cmath>

#include "fracfem/kernel.hpp"

using namespace fracfem;

// Oracle tables computed independently with mpmath (50-digit Gamma), truncated
// to 17 significant digits.
namespace {
const double S[9] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
const double C1[9] = {0.090313982871455613, 0.16600515863350513, 0.2300963816816321,
                      0.28195845299999038,  0.31830988618379067, 0.33354942991224811,
                      0.31988109866734784,  0.26747969093097504, 0.16490493881830272};
const double C2[9] = {0.032551422029941055, 0.066248484194360981, 0.10007289206487784,
                      0.13207971389562194,  0.15915494309189534,  0.17674478557428508,
                      0.17860038243844473,  0.15661172223255976,  0.10084985986148908};
const double B1[9] = {1.0891244210583363,  1.1270604979860277,  1.1191749540701223,
                      1.0736712740308343,  1.0,                 0.90760368421528026,
                      0.80504321284716261, 0.69948434629382641, 0.59648404112824129};
const double B2[9] = {0.96186174622012367, 0.89896543617601429, 0.81910852944765704,
                      0.72957586823616965, 0.63661977236758134, 0.54520517608867532,
                      0.45896071630802717, 0.38027228511891004, 0.31046119130626033};
}  // namespace

TEST_CASE("normalization constant matches the Gamma oracle to 12 digits") {
  for (int k = 0; k < 9; ++k) {
    CHECK(kernel_constant(1, S[k]).value == doctest::Approx(C1[k]).epsilon(1e-12));
    CHECK(kernel_constant(2, S[k]).value == doctest::Approx(C2[k]).epsilon(1e-12));
  }
}

TEST_CASE("ball solution coefficient matches the Gamma oracle to 12 digits") {
  for (int k = 0; k < 9; ++k) {
    CHECK(ball_solution_constant(1, S[k]) == doctest::Approx(B1[k]).epsilon(1e-12));
    CHECK(ball_solution_constant(2, S[k]) == doctest::Approx(B2[k]).epsilon(1e-12));
  }
}

TEST_CASE("c_{n,s} * d_{n,s} = 1") {
  for (int n : {1, 2})
    for (double s = 0.05; s < 1.0; s += 0.05)
      CHECK(ball_solution_constant(n, s) * ball_source_constant(n, s) ==
            doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("normalization constant is continuous in s and vanishes at the endpoints") {
  for (int n : {1, 2}) {
    // |dC/ds| stays below ~2 on (0,1), so a 2e-6 step moves C by < 5e-6
    for (double s = 0.01; s < 0.99; s += 0.005)
      CHECK(std::abs(kernel_constant(n, s + 2e-6).value - kernel_constant(n, s).value) < 5e-6);
    CHECK(std::abs(kernel_constant(n, 1e-6).value) < 1e-4);
    CHECK(std::abs(kernel_constant(n, 1.0 - 1e-6).value) < 1e-4);
  }
}

TEST_CASE("beta function agrees with the Gamma identity") {
  for (double a : {0.3, 1.0, 2.5})
    for (double b : {0.7, 1.5, 4.0}) {
      const double ref = std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
      CHECK(beta_function(a, b) == doctest::Approx(ref).epsilon(1e-13));
    }
  CHECK(beta_function(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("invalid fractional order is rejected") {
  CHECK_THROWS(kernel_constant(1, 0.0));
  CHECK_THROWS(kernel_constant(1, 1.0));
  CHECK_THROWS(kernel_constant(2, -0.5));
  CHECK_THROWS(kernel_constant(3, 0.5));
  CHECK_THROWS(ball_solution_constant(1, 1.5));
}
