#include "dgq/newton.hpp"

#include <Eigen/SparseLU>
#include <cmath>

namespace dgq {

std::pair<DofField, SolveReport> newton_solve(
    const Scheme& scheme, const Eigen::VectorXd& rhs, const NewtonConfig& config,
    const std::optional<DofField>& initial_guess) {
  if (config.abs_tol <= 0.0 || config.rel_tol <= 0.0)
    throw std::invalid_argument("NewtonConfig: tolerances must be positive");
  if (config.max_iterations < 1)
    throw std::invalid_argument("NewtonConfig: max_iterations must be >= 1");

  DofField u = initial_guess ? *initial_guess : scheme.space().make_scalar();
  SolveReport report;

  Eigen::VectorXd res = scheme.residual(u, rhs);
  double res_norm = res.norm();
  report.residual_history.push_back(res_norm);
  const double stop = std::max(config.abs_tol, config.rel_tol * res_norm);

  Eigen::SparseLU<SpMat> lu;
  for (int it = 0; it < config.max_iterations && res_norm > stop; ++it) {
    SpMat jac = scheme.jacobian(u);
    jac.makeCompressed();
    lu.compute(jac);
    if (lu.info() != Eigen::Success) {
      report.failure = "linear solve failed (singular or ill-conditioned "
                       "Jacobian) at iteration " + std::to_string(it);
      report.final_residual = res_norm;
      report.iterations = it;
      return {u, report};
    }
    const Eigen::VectorXd step = lu.solve(-res);

    // backtracking: accept the first halved step that decreases ||R||
    double alpha = 1.0;
    bool accepted = false;
    for (int h = 0; h <= config.max_halvings; ++h, alpha *= 0.5) {
      DofField trial = u;
      trial.coeffs() += alpha * step;
      Eigen::VectorXd trial_res;
      try {
        trial_res = scheme.residual(trial, rhs);
      } catch (const std::runtime_error&) {
        continue;  // non-finite model output at this step length
      }
      const double trial_norm = trial_res.norm();
      if (std::isfinite(trial_norm) && trial_norm < res_norm) {
        u = std::move(trial);
        res = std::move(trial_res);
        res_norm = trial_norm;
        report.step_sizes.push_back(alpha);
        accepted = true;
        break;
      }
    }
    report.iterations = it + 1;
    if (!accepted) {
      report.failure = "line search stalled at iteration " + std::to_string(it);
      report.final_residual = res_norm;
      return {u, report};
    }
    report.residual_history.push_back(res_norm);
  }

  report.final_residual = res_norm;
  report.converged = res_norm <= stop;
  if (!report.converged && report.failure.empty())
    report.failure = "no convergence within " +
                     std::to_string(config.max_iterations) + " iterations";
  return {u, report};
}

std::pair<DofField, SolveReport> newton_solve(
    const Scheme& scheme, const ManufacturedProblem& problem,
    const NewtonConfig& config, const std::optional<DofField>& initial_guess) {
  return newton_solve(scheme, scheme.rhs(problem.f), config, initial_guess);
}

}  // namespace dgq
