#include "dgq/lifting.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dgq {

Lifting::Lifting(const Space& space) : space_(&space) {
  const Mesh& mesh = space.mesh();
  const int m = space.block();

  lift_maps_.resize(mesh.n_edges());
  blocks_.resize(mesh.n_edges());
  std::vector<Triplet> r_trips, s_trips;

  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    const Space::EdgeData& ed = space.edge(e);
    const int n_sides = static_cast<int>(ed.sides.size());
    const double w_avg = edge.is_boundary() ? 1.0 : 0.5;

    // moment maps: point values of one phi component -> side coefficients
    for (int s = 0; s < n_sides; ++s) {
      const double jdet = mesh.jacobian_det(ed.sides[s].elem);
      lift_maps_[e].push_back(-(w_avg / jdet) * ed.sides[s].trace *
                              ed.weights.asDiagonal());
    }

    // dense block for u |-> r^e([[u]]): [[u]]_d(g) = nu_d (u_own - u_nbr)(g)
    EdgeBlock& blk = blocks_[e];
    blk.jump_lift = Eigen::MatrixXd::Zero(n_sides * 2 * m, n_sides * m);
    for (int s = 0; s < n_sides; ++s) {
      blk.elems.push_back(ed.sides[s].elem);
      for (int t = 0; t < n_sides; ++t) {
        const double sign = (t == 0) ? 1.0 : -1.0;
        const Eigen::MatrixXd lt =
            sign * (lift_maps_[e][s] * ed.sides[t].trace.transpose());
        for (int d = 0; d < 2; ++d)
          blk.jump_lift.block(s * 2 * m + d * m, t * m, m, m) =
              edge.normal[d] * lt;
      }
    }

    // scatter into the global operators
    for (int s = 0; s < n_sides; ++s)
      for (int d = 0; d < 2; ++d)
        for (int j = 0; j < m; ++j) {
          const long row = space.sdof(blk.elems[s], d, j);
          for (int t = 0; t < n_sides; ++t)
            for (int i = 0; i < m; ++i) {
              const double v = blk.jump_lift(s * 2 * m + d * m + j, t * m + i);
              if (v != 0.0) r_trips.emplace_back(row, space.vdof(blk.elems[t], i), v);
            }
        }

    // S contribution: jump_lift^T diag(|J_s|) jump_lift
    Eigen::VectorXd msig(n_sides * 2 * m);
    for (int s = 0; s < n_sides; ++s)
      msig.segment(s * 2 * m, 2 * m)
          .setConstant(mesh.jacobian_det(blk.elems[s]));
    const Eigen::MatrixXd se =
        blk.jump_lift.transpose() * msig.asDiagonal() * blk.jump_lift;
    for (int t = 0; t < n_sides; ++t)
      for (int i = 0; i < m; ++i)
        for (int t2 = 0; t2 < n_sides; ++t2)
          for (int i2 = 0; i2 < m; ++i2) {
            const double v = se(t * m + i, t2 * m + i2);
            if (v != 0.0)
              s_trips.emplace_back(space.vdof(blk.elems[t], i),
                                   space.vdof(blk.elems[t2], i2), v);
          }
  }

  r_op_.resize(space.dim_sigma(), space.dim_v());
  r_op_.setFromTriplets(r_trips.begin(), r_trips.end());
  star_matrix_.resize(space.dim_v(), space.dim_v());
  star_matrix_.setFromTriplets(s_trips.begin(), s_trips.end());
}

DofField Lifting::lift_edge_r(int e, const Eigen::Matrix2Xd& phi) const {
  const Space::EdgeData& ed = space_->edge(e);
  const Eigen::VectorXd local = lift_edge_r_local(e, phi);
  DofField out = space_->make_vector();
  const int m = space_->block();
  for (size_t s = 0; s < ed.sides.size(); ++s)
    out.block(ed.sides[s].elem) += local.segment(s * 2 * m, 2 * m);
  return out;
}

Eigen::VectorXd Lifting::lift_edge_r_local(int e, const Eigen::Matrix2Xd& phi) const {
  const Space::EdgeData& ed = space_->edge(e);
  if (phi.cols() != ed.weights.size())
    throw std::invalid_argument("lift_edge_r: mismatched quadrature-point counts");
  const int m = space_->block();
  const int n_sides = static_cast<int>(ed.sides.size());
  Eigen::VectorXd out(n_sides * 2 * m);
  for (int s = 0; s < n_sides; ++s)
    for (int d = 0; d < 2; ++d)
      out.segment(s * 2 * m + d * m, m) =
          lift_maps_[e][s] * phi.row(d).transpose();
  return out;
}

double Lifting::lift_edge_r_norm_sq(int e, const Eigen::Matrix2Xd& phi) const {
  const Space::EdgeData& ed = space_->edge(e);
  const Eigen::VectorXd local = lift_edge_r_local(e, phi);
  const int m = space_->block();
  double out = 0.0;
  for (size_t s = 0; s < ed.sides.size(); ++s)
    out += space_->mesh().jacobian_det(ed.sides[s].elem) *
           local.segment(s * 2 * m, 2 * m).squaredNorm();
  return out;
}

DofField Lifting::lift_edge_l(int e, const Eigen::VectorXd& phi) const {
  const Edge& edge = space_->mesh().edge(e);
  if (edge.is_boundary())
    throw std::invalid_argument("lift_edge_l: interior edges only");
  const Space::EdgeData& ed = space_->edge(e);
  if (phi.size() != ed.weights.size())
    throw std::invalid_argument("lift_edge_l: mismatched quadrature-point counts");
  DofField out = space_->make_vector();
  const int m = space_->block();
  // int l^e(phi).tau = -int_e phi tau.nu_side per side; the averaging factor
  // of the r^e maps is 1/2 on interior edges, so scale by 2 and apply the
  // side's own normal sign.
  for (size_t s = 0; s < ed.sides.size(); ++s) {
    const double sign = (s == 0) ? 1.0 : -1.0;
    auto blk = out.block(ed.sides[s].elem);
    const Eigen::VectorXd c = 2.0 * (lift_maps_[e][s] * phi);
    for (int d = 0; d < 2; ++d)
      blk.segment(d * m, m) += sign * edge.normal[d] * c;
  }
  return out;
}

DofField Lifting::lift_r_of_jumps(const DofField& u) const {
  DofField out = space_->make_vector();
  out.coeffs() = r_op_ * u.coeffs();
  return out;
}

DofField Lifting::lift_l(const std::vector<Eigen::VectorXd>& phi_per_edge) const {
  const Mesh& mesh = space_->mesh();
  DofField out = space_->make_vector();
  const int m = space_->block();
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    if (edge.is_boundary()) continue;
    const Eigen::VectorXd& phi = phi_per_edge[e];
    const Space::EdgeData& ed = space_->edge(e);
    if (phi.size() != ed.weights.size())
      throw std::invalid_argument("lift_l: mismatched quadrature-point counts");
    for (size_t s = 0; s < ed.sides.size(); ++s) {
      const double sign = (s == 0) ? 1.0 : -1.0;
      auto blk = out.block(ed.sides[s].elem);
      const Eigen::VectorXd c = 2.0 * (lift_maps_[e][s] * phi);
      for (int d = 0; d < 2; ++d)
        blk.segment(d * m, m) += sign * edge.normal[d] * c;
    }
  }
  return out;
}

SpMat Lifting::l_beta_operator(const std::vector<Eigen::Vector2d>& beta) const {
  const Mesh& mesh = space_->mesh();
  const int m = space_->block();
  std::vector<Triplet> trips;
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    if (edge.is_boundary()) continue;
    const double bn = beta[e].dot(edge.normal);
    if (bn == 0.0) continue;
    const Space::EdgeData& ed = space_->edge(e);
    // l^e(beta.[[u]]) with beta.[[u]](g) = (beta.nu)(u_own - u_nbr)(g)
    for (size_t s = 0; s < ed.sides.size(); ++s) {
      const double sign = (s == 0) ? 1.0 : -1.0;
      for (size_t t = 0; t < ed.sides.size(); ++t) {
        const double tsign = (t == 0) ? 1.0 : -1.0;
        const Eigen::MatrixXd lt = (2.0 * sign * tsign * bn) *
                                   (lift_maps_[e][s] *
                                    ed.sides[t].trace.transpose());
        for (int d = 0; d < 2; ++d)
          for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i) {
              const double v = edge.normal[d] * lt(j, i);
              if (v != 0.0)
                trips.emplace_back(space_->sdof(ed.sides[s].elem, d, j),
                                   space_->vdof(ed.sides[t].elem, i), v);
            }
      }
    }
  }
  SpMat op(space_->dim_sigma(), space_->dim_v());
  op.setFromTriplets(trips.begin(), trips.end());
  return op;
}

SpMat Lifting::jump_penalty_matrix(const Eigen::VectorXd& mu) const {
  const Mesh& mesh = space_->mesh();
  const int m = space_->block();
  std::vector<Triplet> trips;
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    const Space::EdgeData& ed = space_->edge(e);
    const double scale = mu[e] / edge.length;
    for (size_t s = 0; s < ed.sides.size(); ++s)
      for (size_t t = 0; t < ed.sides.size(); ++t) {
        const double sign = (s == t) ? 1.0 : -1.0;
        const Eigen::MatrixXd blk = (scale * sign) * ed.sides[s].trace *
                                    ed.weights.asDiagonal() *
                                    ed.sides[t].trace.transpose();
        for (int j = 0; j < m; ++j)
          for (int i = 0; i < m; ++i)
            if (blk(j, i) != 0.0)
              trips.emplace_back(space_->vdof(ed.sides[s].elem, j),
                                 space_->vdof(ed.sides[t].elem, i), blk(j, i));
      }
  }
  SpMat p(space_->dim_v(), space_->dim_v());
  p.setFromTriplets(trips.begin(), trips.end());
  return p;
}

double Lifting::star_seminorm_sq(const DofField& u) const {
  return u.coeffs().dot(star_matrix_ * u.coeffs());
}

TraceConstants estimate_trace_constants(const Space& space) {
  const Mesh& mesh = space.mesh();
  const int q = space.degree();
  const Lifting lifting(space);

  TraceConstants tc;
  tc.c_r = std::numeric_limits<double>::max();
  tc.per_edge.reserve(mesh.n_edges());

  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Space::EdgeData& ed = space.edge(e);
    const Edge& edge = mesh.edge(e);
    const int nq = static_cast<int>(ed.weights.size());

    // orthonormal Legendre traces on the edge parameter: the jump space of
    // V_{h,q} on e is {p(t) nu : deg p <= q}, and with this basis the
    // normalizing Gram h_e^{-1} ||[[w]]||^2 is the identity.
    Eigen::MatrixXd leg(q + 1, nq);
    for (int g = 0; g < nq; ++g) {
      const Eigen::Vector2d p0 = mesh.vertex(edge.vertices[0]);
      const double t =
          (ed.qpts.col(g) - p0).norm() / edge.length;
      const double x = 2.0 * t - 1.0;
      double pm1 = 1.0, pc = x;
      for (int k = 0; k <= q; ++k) {
        double val;
        if (k == 0) val = 1.0;
        else if (k == 1) val = x;
        else {
          val = ((2.0 * k - 1.0) * x * pc - (k - 1.0) * pm1) / k;
          pm1 = pc;
          pc = val;
        }
        leg(k, g) = std::sqrt(2.0 * k + 1.0) * val;
      }
    }

    const int m = space.block();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(q + 1, q + 1);
    std::vector<Eigen::VectorXd> coef(q + 1);
    for (int k = 0; k <= q; ++k) {
      Eigen::Matrix2Xd phi(2, nq);
      for (int d = 0; d < 2; ++d) phi.row(d) = edge.normal[d] * leg.row(k);
      coef[k] = lifting.lift_edge_r_local(e, phi);
    }
    for (int k = 0; k <= q; ++k)
      for (int l = 0; l <= q; ++l)
        for (size_t s = 0; s < ed.sides.size(); ++s)
          a(k, l) += mesh.jacobian_det(ed.sides[s].elem) *
                     coef[k].segment(s * 2 * m, 2 * m)
                         .dot(coef[l].segment(s * 2 * m, 2 * m));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    const double lo = std::sqrt(std::max(0.0, es.eigenvalues().minCoeff()));
    const double hi = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
    tc.per_edge.emplace_back(lo, hi);
    tc.c_r = std::min(tc.c_r, lo);
    tc.c_R = std::max(tc.c_R, hi);
  }
  return tc;
}

}  // namespace dgq
