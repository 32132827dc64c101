#include "dgq/field.hpp"

#include <stdexcept>

namespace dgq {

DofField::DofField(const Mesh& mesh, const Basis& basis, SpaceTag tag)
    : mesh_(&mesh), basis_(&basis), tag_(tag) {
  coeffs_ = Eigen::VectorXd::Zero(static_cast<long>(mesh.n_elements()) *
                                  block_size());
}

Eigen::MatrixXd DofField::values(int k, const Eigen::Matrix2Xd& ref_points) const {
  if (k < 0 || k >= mesh_->n_elements())
    throw std::out_of_range("DofField::values: element index out of range");
  const Eigen::MatrixXd phi = basis_->values(ref_points);  // m x npts
  const int m = basis_->size();
  Eigen::MatrixXd out(components(), ref_points.cols());
  for (int c = 0; c < components(); ++c)
    out.row(c) = block(k).segment(c * m, m).transpose() * phi;
  return out;
}

Eigen::MatrixXd DofField::gradients(int k, const Eigen::Matrix2Xd& ref_points) const {
  if (k < 0 || k >= mesh_->n_elements())
    throw std::out_of_range("DofField::gradients: element index out of range");
  const Eigen::MatrixXd dphi = basis_->gradients(ref_points);  // 2m x npts
  const int m = basis_->size();
  const Eigen::Matrix2d jit = mesh_->jacobian_inverse(k).transpose();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * components(), ref_points.cols());
  for (int c = 0; c < components(); ++c) {
    const auto coef = block(k).segment(c * m, m);
    for (Eigen::Index g = 0; g < ref_points.cols(); ++g) {
      Eigen::Vector2d grad_ref = Eigen::Vector2d::Zero();
      for (int j = 0; j < m; ++j) {
        grad_ref.x() += coef[j] * dphi(2 * j + 0, g);
        grad_ref.y() += coef[j] * dphi(2 * j + 1, g);
      }
      out.block<2, 1>(2 * c, g) = jit * grad_ref;
    }
  }
  return out;
}

Eigen::VectorXd DofField::value_at(int k, const Eigen::Vector2d& x) const {
  Eigen::Matrix2Xd ref(2, 1);
  ref.col(0) = mesh_->to_reference(k, x);
  return values(k, ref).col(0);
}

}  // namespace dgq
