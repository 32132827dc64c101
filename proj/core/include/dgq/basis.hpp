#pragma once

#include <Eigen/Dense>

namespace dgq {

/// Orthonormal polynomial basis for P^q on the reference triangle
/// {(x,y) : x,y >= 0, x+y <= 1}. Built from Jacobi polynomials on collapsed
/// coordinates, so the reference mass matrix is the identity and element
/// mass matrices reduce to the affine Jacobian factor.
class Basis {
 public:
  explicit Basis(int degree);

  int degree() const { return degree_; }
  int size() const { return size_; }  // (q+1)(q+2)/2

  /// Shape-function values at reference points (one column per point);
  /// result is size() x npts.
  Eigen::MatrixXd values(const Eigen::Matrix2Xd& ref_points) const;

  /// Reference gradients at reference points; result is 2*size() x npts with
  /// rows interleaved as (d/dx of phi_0, d/dy of phi_0, d/dx of phi_1, ...).
  Eigen::MatrixXd gradients(const Eigen::Matrix2Xd& ref_points) const;

  /// Coefficient matrices of the reference partial derivatives in the basis
  /// itself: d phi_j / d xi_d = sum_s deriv_matrix(d)(s,j) phi_s. Exact since
  /// gradients of P^q stay in P^q.
  const Eigen::MatrixXd& deriv_matrix(int d) const { return deriv_[d]; }

 private:
  int degree_;
  int size_;
  Eigen::MatrixXd deriv_[2];
};

/// dim V_{h,q} for a scalar piecewise-P^q space on n_elements triangles.
long space_dimension(int degree, long n_elements);

}  // namespace dgq
