#include "dgq/projection.hpp"

#include <stdexcept>

namespace dgq {

namespace {

// Orthonormal reference basis: the element mass matrix is |J| times the
// identity, so projecting is a scaled moment computation.
template <typename Moment>
void project(const Mesh& mesh, const Basis& basis, int quad_degree, int comps,
             DofField& out, const Moment& moment) {
  const TriangleRule rule =
      triangle_rule(quad_degree > 0 ? quad_degree : 2 * basis.degree() + 2);
  const Eigen::MatrixXd phi = basis.values(rule.points);
  const int m = basis.size();
  for (int k = 0; k < mesh.n_elements(); ++k) {
    const double jdet = mesh.jacobian_det(k);
    if (!(jdet > 0.0))
      throw std::runtime_error("projection: degenerate element mass matrix");
    auto blk = out.block(k);
    for (Eigen::Index g = 0; g < rule.weights.size(); ++g) {
      const Eigen::Vector2d x = mesh.to_physical(k, rule.points.col(g));
      const double w = rule.weights[g] * jdet;
      for (int c = 0; c < comps; ++c) {
        const double v = w * moment(x, c);
        for (int j = 0; j < m; ++j) blk[c * m + j] += v * phi(j, g);
      }
    }
    blk /= jdet;
  }
}

}  // namespace

DofField project_scalar(const ScalarFn& f, const Mesh& mesh, const Basis& basis,
                        int quad_degree) {
  DofField out(mesh, basis, SpaceTag::Scalar);
  project(mesh, basis, quad_degree, 1, out,
          [&](const Eigen::Vector2d& x, int) { return f(x); });
  return out;
}

DofField galerkin_project_vector(const VectorFn& xi, const Mesh& mesh,
                                 const Basis& basis, int quad_degree) {
  DofField out(mesh, basis, SpaceTag::Vector);
  project(mesh, basis, quad_degree, 2, out,
          [&](const Eigen::Vector2d& x, int c) { return xi(x)[c]; });
  return out;
}

DofField transfer_nested(const Mesh& fine_mesh, const Basis& basis,
                         const DofField& coarse) {
  if (coarse.tag() != SpaceTag::Scalar)
    throw std::invalid_argument("transfer_nested: scalar fields only");
  const Mesh& coarse_mesh = coarse.mesh();

  // locate the coarse element containing each fine centroid
  auto locate = [&](const Eigen::Vector2d& x) {
    for (int k = 0; k < coarse_mesh.n_elements(); ++k) {
      const Eigen::Vector2d xi = coarse_mesh.to_reference(k, x);
      if (xi.x() >= -1e-12 && xi.y() >= -1e-12 && xi.sum() <= 1.0 + 1e-12)
        return k;
    }
    throw std::invalid_argument(
        "transfer_nested: fine element centroid outside the coarse mesh");
  };

  const TriangleRule rule = triangle_rule(2 * basis.degree() + 2);
  const Eigen::MatrixXd phi = basis.values(rule.points);
  DofField out(fine_mesh, basis, SpaceTag::Scalar);
  const int m = basis.size();
  for (int k = 0; k < fine_mesh.n_elements(); ++k) {
    const Eigen::Vector2d centroid = fine_mesh.to_physical(
        k, Eigen::Vector2d(1.0 / 3.0, 1.0 / 3.0));
    const int kc = locate(centroid);
    auto blk = out.block(k);
    for (int g = 0; g < rule.size(); ++g) {
      const Eigen::Vector2d x = fine_mesh.to_physical(k, rule.points.col(g));
      const double v = coarse.value_at(kc, x)[0];
      for (int j = 0; j < m; ++j) blk[j] += rule.weights[g] * v * phi(j, g);
    }
  }
  return out;
}

}  // namespace dgq
