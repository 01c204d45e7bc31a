#pragma once

#include <array>
#include <vector>

#include "fracfem/mesh.hpp"

namespace fracfem {

/// Point rule for the double integral
///   I = \iint_{T1 x T2} f(x,y) / |x-y|^{n+2s} dx dy
/// applied to the *raw* integrand, f(x,y) = (phi(x)-phi(y))(psi(x)-psi(y))
/// with phi, psi continuous piecewise-affine. For the singular classifications
/// the radial direction of the singularity is integrated analytically (Beta
/// integrals, using the homogeneity of P1 differences), so the remaining
/// quadrature acts on an analytic integrand and the weights absorb the kernel's
/// radial mass exactly. Disjoint pairs get tensor Gauss.
struct PairPoint {
  Vec2 x, y;
  double w;
};

struct PairRule {
  PairClass classification = PairClass::disjoint;
  int order = 0;
  std::vector<PairPoint> points;
};

struct QuadOrders {
  int singular = 12;  // angular Gauss points / parameter-triangle degree
  int near = 6;       // disjoint pairs within 3 diameters
  int far = 3;        // disjoint pairs beyond 3 diameters
};

/// 1D elements given by their endpoints. Shared vertices are detected by
/// exact coordinate equality (element endpoints come from one vertex array).
PairRule pair_rule_1d(double a0, double a1, double b0, double b1, double s,
                      const QuadOrders& orders = {});

PairRule pair_rule_2d(const std::array<Vec2, 3>& t1, const std::array<Vec2, 3>& t2, double s,
                      const QuadOrders& orders = {});

/// Rule for a canonical reference configuration of the given classification;
/// k plays the role of QuadOrders::singular (or the tensor order for disjoint).
PairRule singular_pair_rule(PairClass classification, int n, double s, int k);

}  // namespace fracfem
