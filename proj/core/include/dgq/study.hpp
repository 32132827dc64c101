#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "dgq/analysis.hpp"

namespace dgq {

/// Driver configuration for single solves and convergence studies.
struct RunConfig {
  std::string model = "poisson";
  FluxFamily family = FluxFamily::SIPG;
  int degree = 1;
  std::vector<int> levels = {8};   // structured mesh sizes, doubling per level
  bool penalty_auto = true;
  double penalty_value = 1.0;
  double safety = 1.5;
  std::string beta_mode = "zero";  // zero | switch | explicit scalar
  double beta_value = 0.0;
  std::string mms = "sinsin";
  NewtonConfig newton;
  unsigned seed = 12345;           // pinned for reproducible probe fallbacks
  // start each level from the transferred coarser solution (exact on the
  // nested structured meshes); off by default
  bool warm_start = false;
};

struct LevelRow {
  int level = 0;
  double h = 0.0;
  long elements = 0;
  long dofs = 0;
  ErrorReport err;
  double rate_l2 = std::numeric_limits<double>::quiet_NaN();
  double rate_energy = std::numeric_limits<double>::quiet_NaN();
  int newton_iters = 0;
  bool converged = false;
};

struct StudyResult {
  std::vector<LevelRow> rows;
  // least-squares slopes of log err vs log h over the finest >=3 levels
  double slope_l2 = 0.0;
  double slope_energy = 0.0;
  double slope_theta = 0.0;
  double slope_sigma = 0.0;
  bool all_converged = false;
};

/// Resolved per-edge penalties for the configured mode. Auto mode follows
/// the coercivity bounds via the computed trace constants and the model's
/// declared (or probed) ellipticity bounds.
Eigen::VectorXd resolve_penalties(const Space& space, const DiffusionModel& model,
                                  FluxFamily family, bool penalty_auto,
                                  double value, double safety,
                                  unsigned seed = 12345);

/// Per-edge LDG switch vector: "zero", "switch" (+nu_owner/2), or an explicit
/// multiple of the owner normal.
std::vector<Eigen::Vector2d> resolve_beta(const Mesh& mesh,
                                          const std::string& mode, double value);

/// One solve on a structured n x n mesh.
LevelRow run_single(const RunConfig& config, int n, int level_index = 0);

/// Nested refinement study; stops at the first non-converged level (the
/// partial rows are still returned).
StudyResult run_convergence(const RunConfig& config);

/// Least-squares slope of log(err) against log(h) over the last
/// min(window, size) entries.
double ls_slope(const std::vector<double>& h, const std::vector<double>& err,
                int window = 3);

/// CSV with the exact header
/// level,h,elements,dofs,err_l2,err_energy,err_theta,err_sigma,rate_l2,
/// rate_energy,newton_iters,converged
void write_csv(std::ostream& os, const std::vector<LevelRow>& rows);

}  // namespace dgq
