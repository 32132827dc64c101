#pragma once

#include <functional>

#include "dgq/field.hpp"
#include "dgq/quadrature.hpp"

namespace dgq {

using ScalarFn = std::function<double(const Eigen::Vector2d&)>;
using VectorFn = std::function<Eigen::Vector2d(const Eigen::Vector2d&)>;

/// Element-wise L2-orthogonal projection pi_h into V_{h,q}. The residual
/// f - pi_h f is L2-orthogonal to P^q on every element with respect to the
/// quadrature rule used (degree 2q+2 by default).
DofField project_scalar(const ScalarFn& f, const Mesh& mesh, const Basis& basis,
                        int quad_degree = -1);

/// Component-wise Galerkin [L2]^2 projection G_h into Sigma_{h,p}.
DofField galerkin_project_vector(const VectorFn& xi, const Mesh& mesh,
                                 const Basis& basis, int quad_degree = -1);

/// L2 projection of a scalar field living on a coarser mesh onto a finer
/// one. Exact (a coefficient re-expansion) when every fine element lies
/// inside one coarse element, as with the nested structured meshes.
DofField transfer_nested(const Mesh& fine_mesh, const Basis& basis,
                         const DofField& coarse);

}  // namespace dgq
