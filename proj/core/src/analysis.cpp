#include "dgq/analysis.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <stdexcept>

namespace dgq {

namespace {

// trace data of (w_analytic - w_h) at the quadrature points of edge e,
// assembled into the jump [[w]] with the owner normal
Eigen::Matrix2Xd error_jump_data(const Space& space, int e, const DofField& u_h,
                                 const ScalarFn& u_exact) {
  const Mesh& mesh = space.mesh();
  const Edge& edge = mesh.edge(e);
  const Space::EdgeData& ed = space.edge(e);
  const int nq = static_cast<int>(ed.weights.size());
  const int m = space.block();

  Eigen::VectorXd own(nq), nbr(nq);
  for (int g = 0; g < nq; ++g) {
    const double exact = u_exact(ed.qpts.col(g));
    own[g] = exact - u_h.block(ed.sides[0].elem).head(m).dot(ed.sides[0].trace.col(g));
    nbr[g] = edge.is_boundary()
                 ? 0.0
                 : exact - u_h.block(ed.sides[1].elem).head(m).dot(
                               ed.sides[1].trace.col(g));
  }
  Eigen::Matrix2Xd jump(2, nq);
  for (int g = 0; g < nq; ++g)
    jump.col(g) = edge.is_boundary() ? Traces::jump(own[g], edge.normal)
                                     : Traces::jump(own[g], nbr[g], edge.normal);
  return jump;
}

}  // namespace

double l2_norm(const Space& space, const DofField& v) {
  // orthonormal reference basis: mass is |J| per dof
  return std::sqrt(v.coeffs().cwiseProduct(
      v.tag() == SpaceTag::Scalar ? space.mass_v() : space.mass_sigma())
      .dot(v.coeffs()));
}

double h1_broken_seminorm(const Space& space, const DofField& v) {
  const Eigen::VectorXd g = space.gradient_op() * v.coeffs();
  return std::sqrt(space.sigma_dot(g, g));
}

double star_seminorm(const Space&, const Lifting& lifting, const DofField& v) {
  return std::sqrt(lifting.star_seminorm_sq(v));
}

double energy_norm(const Space& space, const Lifting& lifting, const DofField& v) {
  const double h1 = h1_broken_seminorm(space, v);
  return std::sqrt(h1 * h1 + lifting.star_seminorm_sq(v));
}

double energy_norm_analytic(const Space& space, const Lifting& lifting,
                            const ScalarFn& v, const VectorFn& grad_v,
                            int elevated_degree) {
  const Mesh& mesh = space.mesh();
  const int deg = elevated_degree > 0 ? elevated_degree : 2 * space.degree() + 6;
  const TriangleRule rule = triangle_rule(deg);
  double h1_sq = 0.0;
  for (int k = 0; k < mesh.n_elements(); ++k) {
    const double jdet = mesh.jacobian_det(k);
    for (int g = 0; g < rule.size(); ++g)
      h1_sq += rule.weights[g] * jdet *
               grad_v(mesh.to_physical(k, rule.points.col(g))).squaredNorm();
  }
  double star_sq = 0.0;
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    const Space::EdgeData& ed = space.edge(e);
    const int nq = static_cast<int>(ed.weights.size());
    Eigen::Matrix2Xd jump = Eigen::Matrix2Xd::Zero(2, nq);
    if (edge.is_boundary())
      for (int g = 0; g < nq; ++g)
        jump.col(g) = Traces::jump(v(ed.qpts.col(g)), edge.normal);
    star_sq += lifting.lift_edge_r_norm_sq(e, jump);
  }
  return std::sqrt(h1_sq + star_sq);
}

Eigen::VectorXd auto_penalty(const PenaltyRule& rule, const Mesh& mesh) {
  if (rule.safety <= 1.0)
    throw std::invalid_argument("auto_penalty: safety factor must exceed 1");
  double value = 0.0;
  switch (rule.family) {
    case FluxFamily::BR1:
      return Eigen::VectorXd();
    case FluxFamily::SIPG:
      value = rule.safety * rule.c_R * rule.c_R * rule.Lambda * rule.n_l;
      break;
    case FluxFamily::BR2:
      if (!(rule.lambda > 0.0))
        throw std::invalid_argument(
            "auto_penalty: BR2 requires a diffusion lower bound lambda > 0 "
            "(degenerate diffusion is admissible for SIPG only)");
      value = rule.safety * rule.n_l * rule.Lambda / rule.lambda;
      break;
    case FluxFamily::LDG:
      value = rule.safety;  // any positive value is admissible
      break;
  }
  return Eigen::VectorXd::Constant(mesh.n_edges(), value);
}

PenaltyRule make_penalty_rule(const DiffusionModel& model, FluxFamily family,
                              const TraceConstants& tc, double safety,
                              const ProbeConfig& probe) {
  PenaltyRule rule;
  rule.family = family;
  rule.c_R = tc.c_R;
  rule.safety = safety;
  if (model.lambda() && model.Lambda()) {
    rule.lambda = *model.lambda();
    rule.Lambda = *model.Lambda();
  } else {
    const AssumptionReport rep = probe_assumptions(model, probe);
    rule.lambda = model.lambda().value_or(std::max(rep.lambda_hat, 0.0));
    rule.Lambda = model.Lambda().value_or(1.25 * rep.Lambda_hat);
  }
  return rule;
}

ErrorReport error_report(const Scheme& scheme, const Lifting& lifting,
                         const DofField& u_h, const ManufacturedProblem& problem,
                         int elevated_degree) {
  const Space& space = scheme.space();
  const Mesh& mesh = space.mesh();
  const int q = space.degree();
  const int m = space.block();
  const int deg = elevated_degree > 0 ? elevated_degree : 2 * q + 6;
  const TriangleRule rule = triangle_rule(deg);
  const Eigen::MatrixXd phi = space.basis().values(rule.points);
  const Eigen::MatrixXd grad_ref = space.basis().gradients(rule.points);

  const DofField theta_h = scheme.theta_of(u_h);
  const DofField sigma_h = scheme.sigma_of(u_h);

  ErrorReport rep;
  double l2 = 0.0, h1 = 0.0, th = 0.0, sg = 0.0;
  for (int k = 0; k < mesh.n_elements(); ++k) {
    const double jdet = mesh.jacobian_det(k);
    const Eigen::Matrix2d jit = mesh.jacobian_inverse(k).transpose();
    const auto ub = u_h.block(k);
    const auto tb = theta_h.block(k);
    const auto sb = sigma_h.block(k);
    for (int g = 0; g < rule.size(); ++g) {
      const Eigen::Vector2d x = mesh.to_physical(k, rule.points.col(g));
      const double w = rule.weights[g] * jdet;
      const double uv = ub.dot(phi.col(g));
      Eigen::Vector2d gv = Eigen::Vector2d::Zero();
      for (int j = 0; j < m; ++j)
        gv += ub[j] * (jit * grad_ref.block<2, 1>(2 * j, g));
      const Eigen::Vector2d thv(tb.head(m).dot(phi.col(g)),
                                tb.tail(m).dot(phi.col(g)));
      const Eigen::Vector2d sgv(sb.head(m).dot(phi.col(g)),
                                sb.tail(m).dot(phi.col(g)));
      const double ue = problem.exact.u(x);
      const Eigen::Vector2d ge = problem.exact.grad(x);
      l2 += w * (ue - uv) * (ue - uv);
      h1 += w * (ge - gv).squaredNorm();
      th += w * (ge - thv).squaredNorm();
      sg += w * (problem.flux(x) - sgv).squaredNorm();
    }
  }

  double star_sq = 0.0;
  for (int e = 0; e < mesh.n_edges(); ++e)
    star_sq += lifting.lift_edge_r_norm_sq(
        e, error_jump_data(space, e, u_h, problem.exact.u));

  rep.l2 = std::sqrt(l2);
  rep.h1_broken = std::sqrt(h1);
  rep.star = std::sqrt(star_sq);
  rep.energy = std::sqrt(h1 + star_sq);
  rep.theta = std::sqrt(th);
  rep.sigma = std::sqrt(sg);
  return rep;
}

SpMat energy_gram(const Space& space, const Lifting& lifting) {
  const SpMat& d = space.gradient_op();
  SpMat gram = SpMat(d.transpose() * SpMat(space.mass_sigma().asDiagonal() * d)) +
               lifting.star_seminorm_matrix();
  return gram;
}

double dual_norm_estimate(const Space& space, const Lifting& lifting,
                          const Eigen::VectorXd& functional) {
  SpMat gram = energy_gram(space, lifting);
  gram.makeCompressed();
  Eigen::SimplicialLDLT<SpMat> ldlt(gram);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error(
        "dual_norm_estimate: energy Gram matrix is not SPD (rank deficiency)");
  const Eigen::VectorXd y = ldlt.solve(functional);
  const double val = functional.dot(y);
  return std::sqrt(std::max(0.0, val));
}

}  // namespace dgq
