#include "dgq/space.hpp"

namespace dgq {

Space::Space(const Mesh& mesh, int degree, int volume_quad_degree,
             int edge_quad_degree)
    : mesh_(&mesh), basis_(degree) {
  const int q = degree;
  volume_quad_degree_ = volume_quad_degree > 0 ? volume_quad_degree : 2 * q + 2;
  edge_quad_degree_ = edge_quad_degree > 0 ? edge_quad_degree : 2 * q + 1;
  const TriangleRule vol_rule = triangle_rule(volume_quad_degree_);
  const IntervalRule edge_rule = interval_rule(edge_quad_degree_);
  const int m = basis_.size();

  // element tables
  elems_.resize(mesh.n_elements());
  const Eigen::MatrixXd phi_ref = basis_.values(vol_rule.points);
  const Eigen::MatrixXd grad_ref = basis_.gradients(vol_rule.points);
  for (int k = 0; k < mesh.n_elements(); ++k) {
    ElemData& ed = elems_[k];
    const int nq = vol_rule.size();
    ed.qpts.resize(2, nq);
    for (int g = 0; g < nq; ++g)
      ed.qpts.col(g) = mesh.to_physical(k, vol_rule.points.col(g));
    ed.weights = vol_rule.weights * mesh.jacobian_det(k);
    ed.phi = phi_ref;
    const Eigen::Matrix2d jit = mesh.jacobian_inverse(k).transpose();
    ed.grad.resize(2 * m, nq);
    for (int j = 0; j < m; ++j)
      for (int g = 0; g < nq; ++g)
        ed.grad.block<2, 1>(2 * j, g) =
            jit * grad_ref.block<2, 1>(2 * j, g);
  }

  // edge tables
  edges_.resize(mesh.n_edges());
  const int ne = static_cast<int>(edge_rule.points.size());
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    EdgeData& ed = edges_[e];
    const Eigen::Vector2d p0 = mesh.vertex(edge.vertices[0]);
    const Eigen::Vector2d p1 = mesh.vertex(edge.vertices[1]);
    ed.qpts.resize(2, ne);
    for (int g = 0; g < ne; ++g)
      ed.qpts.col(g) = p0 + edge_rule.points[g] * (p1 - p0);
    ed.weights = edge_rule.weights * edge.length;
    auto make_side = [&](int k) {
      EdgeSide side;
      side.elem = k;
      Eigen::Matrix2Xd ref(2, ne);
      for (int g = 0; g < ne; ++g) ref.col(g) = mesh.to_reference(k, ed.qpts.col(g));
      side.trace = basis_.values(ref);
      return side;
    };
    ed.sides.push_back(make_side(edge.owner));
    if (!edge.is_boundary()) ed.sides.push_back(make_side(edge.neighbor));
  }

  // broken gradient and mass diagonals
  std::vector<Triplet> trips;
  trips.reserve(static_cast<size_t>(mesh.n_elements()) * 2 * m * m);
  for (int k = 0; k < mesh.n_elements(); ++k) {
    const Eigen::Matrix2d jit = mesh.jacobian_inverse(k).transpose();
    for (int d = 0; d < 2; ++d) {
      const Eigen::MatrixXd block = jit(d, 0) * basis_.deriv_matrix(0) +
                                    jit(d, 1) * basis_.deriv_matrix(1);
      for (int j = 0; j < m; ++j)
        for (int s = 0; s < m; ++s)
          if (block(s, j) != 0.0)
            trips.emplace_back(sdof(k, d, s), vdof(k, j), block(s, j));
    }
  }
  gradient_op_.resize(dim_sigma(), dim_v());
  gradient_op_.setFromTriplets(trips.begin(), trips.end());

  mass_v_.resize(dim_v());
  mass_sigma_.resize(dim_sigma());
  for (int k = 0; k < mesh.n_elements(); ++k) {
    const double jdet = mesh.jacobian_det(k);
    mass_v_.segment(vdof(k, 0), m).setConstant(jdet);
    mass_sigma_.segment(sdof(k, 0, 0), 2 * m).setConstant(jdet);
  }
}

}  // namespace dgq
