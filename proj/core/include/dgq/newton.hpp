#pragma once

#include <optional>
#include <vector>

#include "dgq/scheme.hpp"

namespace dgq {

struct NewtonConfig {
  double abs_tol = 1e-10;     // on ||R||_2
  double rel_tol = 1e-10;     // relative to the initial residual
  int max_iterations = 50;
  int max_halvings = 10;      // backtracking down to 2^-10
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  double final_residual = 0.0;
  std::vector<double> residual_history;  // nonincreasing under accepted steps
  std::vector<double> step_sizes;
  std::string failure;  // empty on success
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Damped Newton iteration on R(u) = 0 with a sparse direct linear solve.
/// A step is accepted only when the residual norm strictly decreases; the
/// report is always returned, never a silent failure.
std::pair<DofField, SolveReport> newton_solve(
    const Scheme& scheme, const Eigen::VectorXd& rhs,
    const NewtonConfig& config = {},
    const std::optional<DofField>& initial_guess = std::nullopt);

/// Convenience overload building the right-hand side from the manufactured
/// forcing.
std::pair<DofField, SolveReport> newton_solve(
    const Scheme& scheme, const ManufacturedProblem& problem,
    const NewtonConfig& config = {},
    const std::optional<DofField>& initial_guess = std::nullopt);

}  // namespace dgq
