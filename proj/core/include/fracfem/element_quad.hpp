#pragma once

#include <array>
#include <functional>

#include "fracfem/mesh.hpp"

namespace fracfem {

/// Barycentric coordinates of p with respect to element e (2 used in 1D).
std::array<double, 3> barycentric(const SimplicialMesh& mesh, int e, const Vec2& p);

/// Plain Gauss integration over one element. In 1D `degree` is the point count.
double integrate_element(const SimplicialMesh& mesh, int e,
                         const std::function<double(const Vec2&)>& f, int degree);

/// For integrands with an integrable singularity on the part of dOmega touched
/// by the element: geometric subdivision (ratio 1/2, `depth` levels) toward the
/// boundary edges/vertices of the element. Falls back to plain Gauss for
/// interior elements.
double integrate_element_graded(const SimplicialMesh& mesh, int e,
                                const std::function<double(const Vec2&)>& f, int degree,
                                int depth = 20);

}  // namespace fracfem
