#include "dgq/scheme.hpp"

#include <cmath>
#include <stdexcept>

namespace dgq {

std::string to_string(FluxFamily family) {
  switch (family) {
    case FluxFamily::BR1: return "br1";
    case FluxFamily::BR2: return "br2";
    case FluxFamily::SIPG: return "sipg";
    case FluxFamily::LDG: return "ldg";
  }
  return "?";
}

FluxFamily flux_family_from_string(const std::string& name) {
  if (name == "br1") return FluxFamily::BR1;
  if (name == "br2") return FluxFamily::BR2;
  if (name == "sipg") return FluxFamily::SIPG;
  if (name == "ldg") return FluxFamily::LDG;
  throw std::invalid_argument("unknown scheme '" + name +
                              "'; expected br1|br2|sipg|ldg");
}

Scheme::Scheme(const Space& space, const Lifting& lifting,
               std::shared_ptr<const DiffusionModel> model, SchemeConfig config)
    : space_(&space),
      lifting_(&lifting),
      model_(std::move(model)),
      config_(std::move(config)) {
  if (config_.degree < 1)
    throw std::invalid_argument("SchemeConfig: degree must be >= 1");
  if (config_.degree != space.degree())
    throw std::invalid_argument("SchemeConfig: degree does not match the space");
  const int n_edges = space.mesh().n_edges();

  const bool needs_penalty = config_.family != FluxFamily::BR1;
  if (needs_penalty) {
    if (config_.penalty.size() != n_edges)
      throw std::invalid_argument("SchemeConfig: one penalty value per edge required");
    if ((config_.penalty.array() <= 0.0).any())
      throw std::invalid_argument("SchemeConfig: penalties must be strictly positive");
  }
  if (!config_.beta.empty()) {
    if (config_.family != FluxFamily::LDG)
      throw std::invalid_argument("SchemeConfig: beta is an LDG parameter");
    if (static_cast<int>(config_.beta.size()) != n_edges)
      throw std::invalid_argument("SchemeConfig: one beta value per edge required");
    for (const auto& b : config_.beta)
      if (!b.allFinite())
        throw std::invalid_argument("SchemeConfig: beta must be bounded");
  }

  theta_op_ = space.gradient_op() + lifting.r_jump_operator();
  if (config_.family == FluxFamily::LDG && !config_.beta.empty())
    theta_op_ += lifting.l_beta_operator(config_.beta);

  if (config_.family == FluxFamily::SIPG || config_.family == FluxFamily::LDG)
    penalty_matrix_ = lifting.jump_penalty_matrix(config_.penalty);
  else
    penalty_matrix_ = SpMat(space.dim_v(), space.dim_v());
}

DofField Scheme::theta_of(const DofField& u) const {
  DofField theta = space_->make_vector();
  theta.coeffs() = theta_op_ * u.coeffs();
  return theta;
}

DofField Scheme::sigma_of(const DofField& u) const {
  const Eigen::VectorXd theta = theta_op_ * u.coeffs();
  const Mesh& mesh = space_->mesh();
  const int m = space_->block();
  DofField sigma = space_->make_vector();
  for (int k = 0; k < mesh.n_elements(); ++k) {
    const Space::ElemData& ed = space_->elem(k);
    const auto ub = u.block(k);
    const auto tb = theta.segment(space_->sdof(k, 0, 0), 2 * m);
    auto sb = sigma.block(k);
    for (Eigen::Index g = 0; g < ed.weights.size(); ++g) {
      const double uv = ub.dot(ed.phi.col(g));
      const Eigen::Vector2d zv(tb.head(m).dot(ed.phi.col(g)),
                               tb.tail(m).dot(ed.phi.col(g)));
      const Eigen::Vector2d av = model_->a(ed.qpts.col(g), uv, zv);
      for (int d = 0; d < 2; ++d)
        sb.segment(d * m, m) += (ed.weights[g] * av[d]) * ed.phi.col(g);
    }
    sb /= mesh.jacobian_det(k);
  }
  return sigma;
}

Eigen::VectorXd Scheme::rhs(const ScalarFn& f) const {
  const Mesh& mesh = space_->mesh();
  const int m = space_->block();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space_->dim_v());
  for (int k = 0; k < mesh.n_elements(); ++k) {
    const Space::ElemData& ed = space_->elem(k);
    auto seg = out.segment(space_->vdof(k, 0), m);
    for (Eigen::Index g = 0; g < ed.weights.size(); ++g)
      seg += (ed.weights[g] * f(ed.qpts.col(g))) * ed.phi.col(g);
  }
  return out;
}

// moments of a(x, u, Z) against the Sigma basis, with Z the Sigma field
// given by z_coeffs
Eigen::VectorXd Scheme::moments(const Eigen::VectorXd& z_coeffs,
                                const Eigen::VectorXd& u_coeffs) const {
  const Mesh& mesh = space_->mesh();
  const int m = space_->block();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space_->dim_sigma());
  for (int k = 0; k < mesh.n_elements(); ++k) {
    const Space::ElemData& ed = space_->elem(k);
    const auto ub = u_coeffs.segment(space_->vdof(k, 0), m);
    const auto zb = z_coeffs.segment(space_->sdof(k, 0, 0), 2 * m);
    auto seg = out.segment(space_->sdof(k, 0, 0), 2 * m);
    for (Eigen::Index g = 0; g < ed.weights.size(); ++g) {
      const double uv = ub.dot(ed.phi.col(g));
      const Eigen::Vector2d zv(zb.head(m).dot(ed.phi.col(g)),
                               zb.tail(m).dot(ed.phi.col(g)));
      const Eigen::Vector2d av = model_->a(ed.qpts.col(g), uv, zv);
      if (!av.allFinite())
        throw std::runtime_error("non-finite model output on element " +
                                 std::to_string(k));
      for (int d = 0; d < 2; ++d)
        seg.segment(d * m, m) += (ed.weights[g] * av[d]) * ed.phi.col(g);
    }
  }
  return out;
}

Eigen::VectorXd Scheme::b_vector(const DofField& u) const {
  Eigen::VectorXd out;
  switch (config_.family) {
    case FluxFamily::BR1:
    case FluxFamily::LDG: {
      const Eigen::VectorXd m = moments(theta_op_ * u.coeffs(), u.coeffs());
      out = theta_op_.transpose() * m;
      break;
    }
    case FluxFamily::SIPG:
    case FluxFamily::BR2: {
      const Eigen::VectorXd m = moments(theta_op_ * u.coeffs(), u.coeffs());
      const Eigen::VectorXd d =
          moments(space_->gradient_op() * u.coeffs(), u.coeffs());
      out = space_->gradient_op().transpose() * m +
            lifting_->r_jump_operator().transpose() * d;
      if (config_.family == FluxFamily::BR2) out += br2_vector(u);
      break;
    }
  }
  if (penalty_matrix_.nonZeros() > 0) out += penalty_matrix_ * u.coeffs();
  return out;
}

double Scheme::b_form(const DofField& u, const DofField& v) const {
  return v.coeffs().dot(b_vector(u));
}

Eigen::VectorXd Scheme::residual(const DofField& u,
                                 const Eigen::VectorXd& rhs) const {
  return b_vector(u) - rhs;
}

// d/du of the moment vector: m_au (Sigma x V) has the a_u phi pairings and
// m_az (Sigma x Sigma) the a_z tau pairings, both evaluated at (u, Z).
void Scheme::state_matrices(const DofField& u, const Eigen::VectorXd& z_coeffs,
                            SpMat& m_au, SpMat& m_az) const {
  const Mesh& mesh = space_->mesh();
  const int m = space_->block();
  std::vector<Triplet> au_trips, az_trips;
  au_trips.reserve(static_cast<size_t>(mesh.n_elements()) * 2 * m * m);
  az_trips.reserve(static_cast<size_t>(mesh.n_elements()) * 4 * m * m);

  for (int k = 0; k < mesh.n_elements(); ++k) {
    const Space::ElemData& ed = space_->elem(k);
    const int nq = static_cast<int>(ed.weights.size());
    const auto ub = u.block(k);
    const auto zb = z_coeffs.segment(space_->sdof(k, 0, 0), 2 * m);

    Eigen::VectorXd auv[2];
    Eigen::VectorXd azv[2][2];
    for (int d = 0; d < 2; ++d) {
      auv[d].resize(nq);
      for (int d2 = 0; d2 < 2; ++d2) azv[d][d2].resize(nq);
    }
    for (int g = 0; g < nq; ++g) {
      const double uv = ub.dot(ed.phi.col(g));
      const Eigen::Vector2d zv(zb.head(m).dot(ed.phi.col(g)),
                               zb.tail(m).dot(ed.phi.col(g)));
      const Eigen::Vector2d av_u = model_->a_u(ed.qpts.col(g), uv, zv);
      const Eigen::Matrix2d av_z = model_->a_z(ed.qpts.col(g), uv, zv);
      for (int d = 0; d < 2; ++d) {
        auv[d][g] = ed.weights[g] * av_u[d];
        for (int d2 = 0; d2 < 2; ++d2) azv[d][d2][g] = ed.weights[g] * av_z(d, d2);
      }
    }
    for (int d = 0; d < 2; ++d) {
      const Eigen::MatrixXd bau =
          ed.phi * auv[d].asDiagonal() * ed.phi.transpose();
      for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i)
          if (bau(j, i) != 0.0)
            au_trips.emplace_back(space_->sdof(k, d, j), space_->vdof(k, i),
                                  bau(j, i));
      for (int d2 = 0; d2 < 2; ++d2) {
        const Eigen::MatrixXd baz =
            ed.phi * azv[d][d2].asDiagonal() * ed.phi.transpose();
        for (int j = 0; j < m; ++j)
          for (int i = 0; i < m; ++i)
            if (baz(j, i) != 0.0)
              az_trips.emplace_back(space_->sdof(k, d, j), space_->sdof(k, d2, i),
                                    baz(j, i));
      }
    }
  }
  m_au.resize(space_->dim_sigma(), space_->dim_v());
  m_au.setFromTriplets(au_trips.begin(), au_trips.end());
  m_az.resize(space_->dim_sigma(), space_->dim_sigma());
  m_az.setFromTriplets(az_trips.begin(), az_trips.end());
}

SpMat Scheme::jacobian(const DofField& u) const {
  SpMat jac;
  switch (config_.family) {
    case FluxFamily::BR1:
    case FluxFamily::LDG: {
      SpMat m_au, m_az;
      state_matrices(u, theta_op_ * u.coeffs(), m_au, m_az);
      jac = theta_op_.transpose() * SpMat(m_au + SpMat(m_az * theta_op_));
      break;
    }
    case FluxFamily::SIPG:
    case FluxFamily::BR2: {
      SpMat mt_au, mt_az;  // at (u, theta)
      state_matrices(u, theta_op_ * u.coeffs(), mt_au, mt_az);
      SpMat mg_au, mg_az;  // at (u, grad u)
      state_matrices(u, space_->gradient_op() * u.coeffs(), mg_au, mg_az);
      jac = space_->gradient_op().transpose() *
                SpMat(mt_au + SpMat(mt_az * theta_op_)) +
            lifting_->r_jump_operator().transpose() *
                SpMat(mg_au + SpMat(mg_az * space_->gradient_op()));
      if (config_.family == FluxFamily::BR2) {
        std::vector<Triplet> trips;
        br2_jacobian(u, trips);
        SpMat extra(space_->dim_v(), space_->dim_v());
        extra.setFromTriplets(trips.begin(), trips.end());
        jac += extra;
      }
      break;
    }
  }
  if (penalty_matrix_.nonZeros() > 0) jac += penalty_matrix_;
  return jac;
}

AssembledSystem Scheme::assemble(const DofField& u,
                                 const Eigen::VectorXd& rhs) const {
  return {residual(u, rhs), jacobian(u)};
}

// sum_e eta_e int a(u, r^e([[u]])) . r^e([[phi_i]]) dx, contracted through
// the per-edge jump-lift blocks
Eigen::VectorXd Scheme::br2_vector(const DofField& u) const {
  const Mesh& mesh = space_->mesh();
  const int m = space_->block();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space_->dim_v());
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Lifting::EdgeBlock& blk = lifting_->edge_block(e);
    const int n_sides = static_cast<int>(blk.elems.size());
    Eigen::VectorXd ulocal(n_sides * m);
    for (int s = 0; s < n_sides; ++s) ulocal.segment(s * m, m) = u.block(blk.elems[s]);
    const Eigen::VectorXd lift = blk.jump_lift * ulocal;

    Eigen::VectorXd me = Eigen::VectorXd::Zero(n_sides * 2 * m);
    for (int s = 0; s < n_sides; ++s) {
      const int k = blk.elems[s];
      const Space::ElemData& ed = space_->elem(k);
      const auto ub = u.block(k);
      const auto lb = lift.segment(s * 2 * m, 2 * m);
      auto seg = me.segment(s * 2 * m, 2 * m);
      for (Eigen::Index g = 0; g < ed.weights.size(); ++g) {
        const double uv = ub.dot(ed.phi.col(g));
        const Eigen::Vector2d zv(lb.head(m).dot(ed.phi.col(g)),
                                 lb.tail(m).dot(ed.phi.col(g)));
        const Eigen::Vector2d av = model_->a(ed.qpts.col(g), uv, zv);
        for (int d = 0; d < 2; ++d)
          seg.segment(d * m, m) += (ed.weights[g] * av[d]) * ed.phi.col(g);
      }
    }
    const Eigen::VectorXd contrib =
        config_.penalty[e] * (blk.jump_lift.transpose() * me);
    for (int s = 0; s < n_sides; ++s)
      out.segment(space_->vdof(blk.elems[s], 0), m) += contrib.segment(s * m, m);
  }
  return out;
}

void Scheme::br2_jacobian(const DofField& u, std::vector<Triplet>& trips) const {
  const Mesh& mesh = space_->mesh();
  const int m = space_->block();
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Lifting::EdgeBlock& blk = lifting_->edge_block(e);
    const int n_sides = static_cast<int>(blk.elems.size());
    Eigen::VectorXd ulocal(n_sides * m);
    for (int s = 0; s < n_sides; ++s) ulocal.segment(s * m, m) = u.block(blk.elems[s]);
    const Eigen::VectorXd lift = blk.jump_lift * ulocal;

    Eigen::MatrixXd m_au = Eigen::MatrixXd::Zero(n_sides * 2 * m, n_sides * m);
    Eigen::MatrixXd m_az = Eigen::MatrixXd::Zero(n_sides * 2 * m, n_sides * 2 * m);
    for (int s = 0; s < n_sides; ++s) {
      const int k = blk.elems[s];
      const Space::ElemData& ed = space_->elem(k);
      const auto ub = u.block(k);
      const auto lb = lift.segment(s * 2 * m, 2 * m);
      for (Eigen::Index g = 0; g < ed.weights.size(); ++g) {
        const double uv = ub.dot(ed.phi.col(g));
        const Eigen::Vector2d zv(lb.head(m).dot(ed.phi.col(g)),
                                 lb.tail(m).dot(ed.phi.col(g)));
        const Eigen::Vector2d av_u = model_->a_u(ed.qpts.col(g), uv, zv);
        const Eigen::Matrix2d av_z = model_->a_z(ed.qpts.col(g), uv, zv);
        const Eigen::VectorXd wphi = ed.weights[g] * ed.phi.col(g);
        for (int d = 0; d < 2; ++d) {
          m_au.block(s * 2 * m + d * m, s * m, m, m) +=
              (av_u[d] * wphi) * ed.phi.col(g).transpose();
          for (int d2 = 0; d2 < 2; ++d2)
            m_az.block(s * 2 * m + d * m, s * 2 * m + d2 * m, m, m) +=
                (av_z(d, d2) * wphi) * ed.phi.col(g).transpose();
        }
      }
    }
    const Eigen::MatrixXd local =
        config_.penalty[e] *
        (blk.jump_lift.transpose() * (m_au + m_az * blk.jump_lift));
    for (int s = 0; s < n_sides; ++s)
      for (int j = 0; j < m; ++j)
        for (int t = 0; t < n_sides; ++t)
          for (int i = 0; i < m; ++i) {
            const double v = local(s * m + j, t * m + i);
            if (v != 0.0)
              trips.emplace_back(space_->vdof(blk.elems[s], j),
                                 space_->vdof(blk.elems[t], i), v);
          }
  }
}

Eigen::VectorXd Scheme::consistency_functional(
    const ManufacturedProblem& problem) const {
  const Mesh& mesh = space_->mesh();
  const int m = space_->block();
  // project with the space's own rule so the moment identities that relate
  // E_p to B(u, .) - F(.) stay quadrature-consistent
  const DofField proj = galerkin_project_vector(
      [&](const Eigen::Vector2d& x) { return problem.flux(x); }, mesh,
      space_->basis(), space_->volume_quad_degree());

  Eigen::VectorXd out = Eigen::VectorXd::Zero(space_->dim_v());
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    const Space::EdgeData& ed = space_->edge(e);
    const int nq = static_cast<int>(ed.weights.size());
    const int n_sides = static_cast<int>(ed.sides.size());

    // projection defect traces per side
    std::vector<Eigen::Matrix2Xd> defect(n_sides);
    for (int s = 0; s < n_sides; ++s) {
      defect[s].resize(2, nq);
      const auto pb = proj.block(ed.sides[s].elem);
      for (int g = 0; g < nq; ++g) {
        const Eigen::Vector2d exact = problem.flux(ed.qpts.col(g));
        const Eigen::Vector2d ph(
            pb.head(m).dot(ed.sides[s].trace.col(g)),
            pb.tail(m).dot(ed.sides[s].trace.col(g)));
        defect[s].col(g) = exact - ph;
      }
    }

    for (int g = 0; g < nq; ++g) {
      Eigen::Vector2d avg = defect[0].col(g);
      if (n_sides == 2) avg = 0.5 * (defect[0].col(g) + defect[1].col(g));
      // { (I-G_h) a } . [[v]] over all edges
      for (int s = 0; s < n_sides; ++s) {
        const double sign = (s == 0) ? 1.0 : -1.0;
        const double factor = ed.weights[g] * avg.dot(sign * edge.normal);
        out.segment(space_->vdof(ed.sides[s].elem, 0), m) +=
            factor * ed.sides[s].trace.col(g);
      }
      // LDG adds the beta pairing with the scalar defect jump on interior
      // edges (the adjoint of the primal l(beta.[[u]]) term)
      if (config_.family == FluxFamily::LDG && !config_.beta.empty() &&
          n_sides == 2) {
        const double bn = config_.beta[e].dot(edge.normal);
        if (bn != 0.0) {
          const double djump =
              edge.normal.dot(defect[0].col(g) - defect[1].col(g));
          for (int s = 0; s < n_sides; ++s) {
            const double sign = (s == 0) ? 1.0 : -1.0;
            const double factor = ed.weights[g] * djump * bn * sign;
            out.segment(space_->vdof(ed.sides[s].elem, 0), m) +=
                factor * ed.sides[s].trace.col(g);
          }
        }
      }
    }
  }
  return out;
}

double Scheme::consistency_error(const ManufacturedProblem& problem,
                                 const DofField& v) const {
  return consistency_functional(problem).dot(v.coeffs());
}

}  // namespace dgq
