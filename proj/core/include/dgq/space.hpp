#pragma once

#include <Eigen/Sparse>
#include <vector>

#include "dgq/basis.hpp"
#include "dgq/field.hpp"
#include "dgq/mesh.hpp"
#include "dgq/quadrature.hpp"

namespace dgq {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Discrete spaces V_{h,q} and Sigma_{h,p} with p = q on a fixed mesh,
/// together with the quadrature caches every assembly path shares.
/// Holds a reference to the mesh: the mesh must outlive the Space.
///
/// Dof layout: scalar dof (k,j) -> k*m + j; vector dof (k,d,j) ->
/// k*2m + d*m + j with m = (q+1)(q+2)/2.
class Space {
 public:
  struct ElemData {
    Eigen::Matrix2Xd qpts;      // physical quadrature points
    Eigen::VectorXd weights;    // physical weights (reference w * |J|)
    Eigen::MatrixXd phi;        // m x nq basis values
    Eigen::MatrixXd grad;       // 2m x nq physical gradients, rows (j,d)->2j+d
  };
  struct EdgeSide {
    int elem = -1;
    Eigen::MatrixXd trace;      // m x nq basis values at the edge points
  };
  struct EdgeData {
    Eigen::Matrix2Xd qpts;      // physical points, shared by both sides
    Eigen::VectorXd weights;    // arclength weights, sum = h_e
    std::vector<EdgeSide> sides;  // owner first, then neighbor if interior
  };

  Space(const Mesh& mesh, int degree, int volume_quad_degree = -1,
        int edge_quad_degree = -1);

  const Mesh& mesh() const { return *mesh_; }
  const Basis& basis() const { return basis_; }
  int degree() const { return basis_.degree(); }
  int block() const { return basis_.size(); }
  int volume_quad_degree() const { return volume_quad_degree_; }
  int edge_quad_degree() const { return edge_quad_degree_; }
  long dim_v() const { return mesh_->n_elements() * static_cast<long>(block()); }
  long dim_sigma() const { return 2 * dim_v(); }

  const ElemData& elem(int k) const { return elems_[k]; }
  const EdgeData& edge(int e) const { return edges_[e]; }

  long vdof(int k, int j) const { return static_cast<long>(k) * block() + j; }
  long sdof(int k, int d, int j) const {
    return static_cast<long>(k) * 2 * block() + d * block() + j;
  }

  /// Broken gradient as a sparse operator D : V_{h,q} -> Sigma_{h,q}.
  const SpMat& gradient_op() const { return gradient_op_; }

  /// Diagonals of the V and Sigma mass matrices (|J_k| per dof).
  const Eigen::VectorXd& mass_v() const { return mass_v_; }
  const Eigen::VectorXd& mass_sigma() const { return mass_sigma_; }

  DofField make_scalar() const { return DofField(*mesh_, basis_, SpaceTag::Scalar); }
  DofField make_vector() const { return DofField(*mesh_, basis_, SpaceTag::Vector); }

  /// L2 inner product of two Sigma coefficient vectors.
  double sigma_dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    return a.cwiseProduct(mass_sigma_).dot(b);
  }

 private:
  const Mesh* mesh_;
  Basis basis_;
  int volume_quad_degree_ = 0;
  int edge_quad_degree_ = 0;
  std::vector<ElemData> elems_;
  std::vector<EdgeData> edges_;
  SpMat gradient_op_;
  Eigen::VectorXd mass_v_, mass_sigma_;
};

}  // namespace dgq
