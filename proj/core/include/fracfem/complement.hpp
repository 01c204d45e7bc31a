#pragma once

#include <array>

#include "fracfem/mesh.hpp"

namespace fracfem {

/// omega(x) = \int_{Omega^c} |x-y|^{-n-2s} dy for x strictly inside Omega.
/// 1D is the exact antiderivative; 2D reduces the area integral to boundary
/// edge integrals via the divergence theorem (the kernel is the divergence of
/// an explicit radial field) and evaluates those with quadrature refined
/// toward the closest point of each edge.
double complement_weight(const Vec2& x, const Domain& domain, double s);

/// Local matrix of \int_T lambda_a lambda_b omega over element e. Entries
/// involving boundary vertices are returned as 0 (the corresponding hats do
/// not vanish on dOmega, so the integral may diverge; those dofs carry no
/// degree of freedom anyway).
using LocalComplementMatrix = std::array<std::array<double, 3>, 3>;
LocalComplementMatrix complement_element_matrix(const SimplicialMesh& mesh, int e, double s,
                                                int order = 8);

/// \int_Omega phi_i phi_j omega for global hats (0 if either vertex is on the
/// boundary); sums complement_element_matrix over elements containing both.
double complement_mass_entry(const SimplicialMesh& mesh, int vi, int vj, double s,
                             int order = 8);

}  // namespace fracfem
