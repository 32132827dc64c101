#pragma once

#include <memory>
#include <string>

#include "dgq/diffusion.hpp"
#include "dgq/lifting.hpp"
#include "dgq/projection.hpp"
#include "dgq/space.hpp"

namespace dgq {

enum class FluxFamily { BR1, BR2, SIPG, LDG };

std::string to_string(FluxFamily family);
FluxFamily flux_family_from_string(const std::string& name);

/// Assembly configuration with resolved per-edge parameters. `penalty` holds
/// mu_e for SIPG/LDG and eta_e for BR2 (unused by BR1); `beta` is the LDG
/// switch vector, constant per interior edge (empty means beta = 0).
struct SchemeConfig {
  FluxFamily family = FluxFamily::SIPG;
  int degree = 1;
  Eigen::VectorXd penalty;
  std::vector<Eigen::Vector2d> beta;
};

struct AssembledSystem {
  Eigen::VectorXd residual;
  SpMat jacobian;
};

/// Nonlinear residual R_i = B(u_h, phi_i) - F(phi_i) and its Frechet
/// derivative for the primal forms
///   BR1 :  B(u,v) = int a(u, th(u)) . th(v)
///   BR2 :  B(u,v) = int a(u, th) . grad v + a(u, grad u) . r([[v]])
///                   + sum_e eta_e int a(u, r^e([[u]])) . r^e([[v]])
///   SIPG:  B(u,v) = int a(u, th) . grad v + a(u, grad u) . r([[v]])
///                   + sum_e (mu_e/h_e) int_e [[u]].[[v]]
///   LDG :  B(u,v) = int a(u, th(u)) . th(v) + sum_e (mu_e/h_e) int_e [[u]].[[v]]
/// with th(u) = grad_h u + r([[u]]) (+ l(beta.[[u]]) for LDG).
///
/// The r([[v]]) pairings are assembled through the lifting moment identity
/// (transposing the precomputed jump-lift operator) rather than forming
/// r([[phi_i]]) per test function. Assembly is deterministic: elements and
/// edges are visited in a fixed order.
class Scheme {
 public:
  Scheme(const Space& space, const Lifting& lifting,
         std::shared_ptr<const DiffusionModel> model, SchemeConfig config);

  const Space& space() const { return *space_; }
  const SchemeConfig& config() const { return config_; }
  const DiffusionModel& model() const { return *model_; }

  /// theta_h(u) = grad_h u + r([[u]]) (+ l(beta.[[u]]) for LDG).
  DofField theta_of(const DofField& u) const;

  /// sigma_h = G_h(a(u_h, theta_h(u_h))).
  DofField sigma_of(const DofField& u) const;

  Eigen::VectorXd rhs(const ScalarFn& f) const;

  /// The B(u, .) part of the residual, as a vector over test basis functions.
  Eigen::VectorXd b_vector(const DofField& u) const;
  double b_form(const DofField& u, const DofField& v) const;

  Eigen::VectorXd residual(const DofField& u, const Eigen::VectorXd& rhs) const;
  SpMat jacobian(const DofField& u) const;
  AssembledSystem assemble(const DofField& u, const Eigen::VectorXd& rhs) const;

  /// Primal consistency functional E_p(u, phi_i) of the exact solution:
  /// face integrals of the Galerkin projection defect (I - G_h) a(u, grad u).
  Eigen::VectorXd consistency_functional(const ManufacturedProblem& problem) const;
  double consistency_error(const ManufacturedProblem& problem,
                           const DofField& v) const;

  /// u |-> theta coefficients (the family-specific theta operator).
  const SpMat& theta_op() const { return theta_op_; }
  /// Jump penalty Gram matrix; zero for BR1/BR2.
  const SpMat& penalty_matrix() const { return penalty_matrix_; }

 private:
  Eigen::VectorXd moments(const Eigen::VectorXd& z_coeffs,
                          const Eigen::VectorXd& u_coeffs) const;
  void state_matrices(const DofField& u, const Eigen::VectorXd& sigma_coeffs,
                      SpMat& m_au, SpMat& m_az) const;
  Eigen::VectorXd br2_vector(const DofField& u) const;
  void br2_jacobian(const DofField& u, std::vector<Triplet>& trips) const;

  const Space* space_;
  const Lifting* lifting_;
  std::shared_ptr<const DiffusionModel> model_;
  SchemeConfig config_;
  SpMat theta_op_;
  SpMat penalty_matrix_;
};

}  // namespace dgq
