#pragma once

#include "dgq/lifting.hpp"
#include "dgq/newton.hpp"
#include "dgq/scheme.hpp"

namespace dgq {

// ---------------------------------------------------------------------------
// broken-space norms: || . ||_L2, broken | . |_H1, the lifted jump seminorm
// | . |_{*,h} and the energy norm
//   ||v||_h^2 = |v|_{1,h}^2 + sum_e || r^e([[v]]) ||_{L2}^2.
// ---------------------------------------------------------------------------

double l2_norm(const Space& space, const DofField& v);
double h1_broken_seminorm(const Space& space, const DofField& v);
double star_seminorm(const Space& space, const Lifting& lifting, const DofField& v);
double energy_norm(const Space& space, const Lifting& lifting, const DofField& v);

/// Energy norm of an analytic function (boundary-trace liftings included, so
/// functions with nonzero Dirichlet trace pick up the |.|_{*,h} part).
double energy_norm_analytic(const Space& space, const Lifting& lifting,
                            const ScalarFn& v, const VectorFn& grad_v,
                            int elevated_degree = -1);

// ---------------------------------------------------------------------------
// penalty rules
// ---------------------------------------------------------------------------

/// Penalty bounds with a safety margin:
///   SIPG : mu_e  = safety * C_R^2 * Lambda * N_l
///   BR2  : eta_e = safety * N_l * Lambda / lambda    (needs lambda > 0)
///   LDG  : mu_e  = safety                            (any positive value)
struct PenaltyRule {
  FluxFamily family = FluxFamily::SIPG;
  double lambda = 0.0;
  double Lambda = 1.0;
  double c_R = 1.0;
  int n_l = 3;
  double safety = 1.5;
};

Eigen::VectorXd auto_penalty(const PenaltyRule& rule, const Mesh& mesh);

/// Fills lambda/Lambda from the model's declared constants, falling back to
/// probed estimates (Lambda inflated by 1.25); c_R from the trace constants.
PenaltyRule make_penalty_rule(const DiffusionModel& model, FluxFamily family,
                              const TraceConstants& tc, double safety = 1.5,
                              const ProbeConfig& probe = {});

// ---------------------------------------------------------------------------
// error measurement against manufactured solutions
// ---------------------------------------------------------------------------

struct ErrorReport {
  double l2 = 0.0;        // ||u - u_h||_L2
  double energy = 0.0;    // ||u - u_h||_h
  double h1_broken = 0.0; // |u - u_h|_{H1,h}
  double star = 0.0;      // |u - u_h|_{*,h}
  double theta = 0.0;     // ||grad u - theta_h||_L2
  double sigma = 0.0;     // ||a(u, grad u) - sigma_h||_L2
};

/// Errors of a discrete solution, measured with an elevated quadrature rule
/// (degree 2q+6 by default) against the analytic solution.
ErrorReport error_report(const Scheme& scheme, const Lifting& lifting,
                         const DofField& u_h, const ManufacturedProblem& problem,
                         int elevated_degree = -1);

// ---------------------------------------------------------------------------
// dual norms on V_{h,q}
// ---------------------------------------------------------------------------

/// Gram matrix of the energy inner product on V_{h,q} (SPD: the jump part
/// includes the Dirichlet boundary liftings).
SpMat energy_gram(const Space& space, const Lifting& lifting);

/// sup over 0 != w in V_{h,q} of |A(w)| / ||w||_h for a functional given by
/// its values on the basis; exact on the discrete space via the energy Gram.
double dual_norm_estimate(const Space& space, const Lifting& lifting,
                          const Eigen::VectorXd& functional);

}  // namespace dgq
