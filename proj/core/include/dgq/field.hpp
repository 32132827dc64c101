#pragma once

#include <Eigen/Dense>

#include "dgq/basis.hpp"
#include "dgq/mesh.hpp"

namespace dgq {

enum class SpaceTag { Scalar, Vector };  // V_{h,q} or Sigma_{h,p}

/// Coefficient vector of a piecewise-polynomial function, element-major.
/// Vector fields store both components per element block, component-major:
/// block k = [c(k,0,0..m), c(k,1,0..m)]. No inter-element continuity is
/// implied. Concurrent reads are safe; writes are exclusive.
class DofField {
 public:
  DofField(const Mesh& mesh, const Basis& basis, SpaceTag tag);

  const Mesh& mesh() const { return *mesh_; }
  const Basis& basis() const { return *basis_; }
  SpaceTag tag() const { return tag_; }
  int degree() const { return basis_->degree(); }
  int components() const { return tag_ == SpaceTag::Scalar ? 1 : 2; }
  int block_size() const { return components() * basis_->size(); }

  Eigen::VectorXd& coeffs() { return coeffs_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }

  /// Coefficient block of one element (all components).
  Eigen::VectorBlock<Eigen::VectorXd> block(int k) {
    return coeffs_.segment(static_cast<long>(k) * block_size(), block_size());
  }
  Eigen::VectorBlock<const Eigen::VectorXd> block(int k) const {
    return coeffs_.segment(static_cast<long>(k) * block_size(), block_size());
  }

  /// Values of the restriction to element k at reference points; result is
  /// components() x npts.
  Eigen::MatrixXd values(int k, const Eigen::Matrix2Xd& ref_points) const;

  /// Broken (element-wise) physical gradient on element k; result is
  /// 2*components() x npts, component-major rows.
  Eigen::MatrixXd gradients(int k, const Eigen::Matrix2Xd& ref_points) const;

  /// Convenience single-point evaluation through the physical coordinates.
  Eigen::VectorXd value_at(int k, const Eigen::Vector2d& x) const;

 private:
  const Mesh* mesh_;
  const Basis* basis_;
  SpaceTag tag_;
  Eigen::VectorXd coeffs_;
};

}  // namespace dgq
