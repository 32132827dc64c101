#pragma once

#include <vector>

#include "dgq/space.hpp"

namespace dgq {

/// Trace constants of the lifting inequality
///   C_r h_e^{-1/2} ||[[w]]||_e <= ||r^e([[w]])|| <= C_R h_e^{-1/2} ||[[w]]||_e,
/// computed exactly over the finite-dimensional jump space of V_{h,q} by a
/// per-edge eigenproblem. Dimensionless and mesh-size independent for a
/// fixed element shape.
struct TraceConstants {
  double c_r = 0.0;
  double c_R = 0.0;
  std::vector<std::pair<double, double>> per_edge;  // (min, max) ratio per edge
};

/// Edge-wise and global lifting operators r^e, l^e, r, l into Sigma_{h,p}.
///
/// r^e is defined by  int r^e(phi) . tau dx = -int_e phi . {tau} ds  and
/// l^e by             int l^e(phi) . tau dx = -int_e phi [[tau]] ds
/// for all tau in Sigma_{h,p}; both are supported on the elements adjacent
/// to e and computed from the local (diagonal) mass systems. Edge liftings
/// are independent and merged in a fixed edge order, so results are
/// deterministic.
class Lifting {
 public:
  explicit Lifting(const Space& space);

  const Space& space() const { return *space_; }

  /// r^e of vector-valued trace data phi given at the edge quadrature points.
  DofField lift_edge_r(int e, const Eigen::Matrix2Xd& phi) const;

  /// Same, but returning only the stacked coefficients on the adjacent
  /// elements (owner block first).
  Eigen::VectorXd lift_edge_r_local(int e, const Eigen::Matrix2Xd& phi) const;
  double lift_edge_r_norm_sq(int e, const Eigen::Matrix2Xd& phi) const;

  /// l^e of scalar trace data; interior edges only.
  DofField lift_edge_l(int e, const Eigen::VectorXd& phi) const;

  /// r([[u]]) = sum over all edges of r^e([[u]]) for a scalar field u.
  DofField lift_r_of_jumps(const DofField& u) const;

  /// l(phi) for scalar data phi given per interior edge at quadrature points.
  DofField lift_l(const std::vector<Eigen::VectorXd>& phi_per_edge) const;

  /// Sparse operator u |-> coefficients of r([[u]]).
  const SpMat& r_jump_operator() const { return r_op_; }

  /// Sparse operator u |-> coefficients of l(beta . [[u]]) with beta constant
  /// per interior edge.
  SpMat l_beta_operator(const std::vector<Eigen::Vector2d>& beta) const;

  /// Gram matrix of the lifted-jump seminorm: |v|_{*,h}^2 = v^T S v.
  const SpMat& star_seminorm_matrix() const { return star_matrix_; }

  /// Gram matrix of sum_e (mu_e/h_e) int_e [[u]].[[v]] ds.
  SpMat jump_penalty_matrix(const Eigen::VectorXd& mu) const;

  /// Dense per-edge operator taking the stacked scalar coefficients of the
  /// adjacent elements to the stacked Sigma coefficients of r^e([[u]]).
  struct EdgeBlock {
    std::vector<int> elems;       // adjacent elements, owner first
    Eigen::MatrixXd jump_lift;    // (n_sides*2m) x (n_sides*m)
  };
  const EdgeBlock& edge_block(int e) const { return blocks_[e]; }

  /// ||r^e([[u]])||_{L2}^2 summed per edge (the *,h seminorm pieces).
  double star_seminorm_sq(const DofField& u) const;

 private:
  const Space* space_;
  // -(w_avg / |J_side|) * trace * diag(omega); maps point values of one
  // component of phi to the side's coefficient block.
  std::vector<std::vector<Eigen::MatrixXd>> lift_maps_;
  std::vector<EdgeBlock> blocks_;
  SpMat r_op_;
  SpMat star_matrix_;
};

TraceConstants estimate_trace_constants(const Space& space);

}  // namespace dgq
