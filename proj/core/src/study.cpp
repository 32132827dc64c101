#include "dgq/study.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>

namespace dgq {

Eigen::VectorXd resolve_penalties(const Space& space, const DiffusionModel& model,
                                  FluxFamily family, bool penalty_auto,
                                  double value, double safety, unsigned seed) {
  if (family == FluxFamily::BR1) return Eigen::VectorXd();
  if (!penalty_auto) {
    if (!(value > 0.0))
      throw std::invalid_argument("explicit penalty must be strictly positive");
    return Eigen::VectorXd::Constant(space.mesh().n_edges(), value);
  }
  TraceConstants tc;
  if (family == FluxFamily::SIPG) tc = estimate_trace_constants(space);
  ProbeConfig probe;
  probe.seed = seed;
  const PenaltyRule rule = make_penalty_rule(model, family, tc, safety, probe);
  return auto_penalty(rule, space.mesh());
}

std::vector<Eigen::Vector2d> resolve_beta(const Mesh& mesh,
                                          const std::string& mode, double value) {
  if (mode == "zero") return {};
  std::vector<Eigen::Vector2d> beta(mesh.n_edges(), Eigen::Vector2d::Zero());
  const double scale = (mode == "switch") ? 0.5 : value;
  if (mode != "switch" && !std::isfinite(value))
    throw std::invalid_argument("beta value must be finite");
  for (int e = 0; e < mesh.n_edges(); ++e)
    if (!mesh.edge(e).is_boundary()) beta[e] = scale * mesh.edge(e).normal;
  return beta;
}

namespace {

LevelRow run_level(const RunConfig& config, const Mesh& mesh, const Space& space,
                   const Lifting& lifting, int level_index,
                   const std::optional<DofField>& guess, DofField* solution) {
  const auto model = make_model(config.model);
  SchemeConfig sc;
  sc.family = config.family;
  sc.degree = config.degree;
  sc.penalty = resolve_penalties(space, *model, config.family, config.penalty_auto,
                                 config.penalty_value, config.safety, config.seed);
  sc.beta = resolve_beta(mesh, config.beta_mode, config.beta_value);
  const Scheme scheme(space, lifting, model, sc);

  const ManufacturedProblem problem =
      make_manufactured(model, make_exact_solution(config.mms));
  auto [u_h, report] = newton_solve(scheme, problem, config.newton, guess);

  LevelRow row;
  row.level = level_index;
  row.h = mesh.h_max();
  row.elements = mesh.n_elements();
  row.dofs = space.dim_v();
  row.newton_iters = report.iterations;
  row.converged = report.converged;
  if (report.converged)
    row.err = error_report(scheme, lifting, u_h, problem);
  if (solution) *solution = std::move(u_h);
  return row;
}

}  // namespace

LevelRow run_single(const RunConfig& config, int n, int level_index) {
  const Mesh mesh = build_structured(n);
  const Space space(mesh, config.degree);
  const Lifting lifting(space);
  return run_level(config, mesh, space, lifting, level_index, std::nullopt,
                   nullptr);
}

double ls_slope(const std::vector<double>& h, const std::vector<double>& err,
                int window) {
  const int n = static_cast<int>(h.size());
  const int k = std::min(n, std::max(window, 2));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = n - k; i < n; ++i) {
    const double x = std::log(h[i]);
    const double y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

StudyResult run_convergence(const RunConfig& config) {
  if (config.levels.size() < 2)
    throw std::invalid_argument("convergence study needs at least 2 levels");
  StudyResult result;
  std::vector<double> hs, e_l2, e_en, e_th, e_sg;
  // previous level kept alive for warm starts (the solution references them)
  std::unique_ptr<Mesh> prev_mesh;
  std::unique_ptr<Space> prev_space;
  std::optional<DofField> prev_solution;
  for (size_t i = 0; i < config.levels.size(); ++i) {
    auto mesh = std::make_unique<Mesh>(build_structured(config.levels[i]));
    auto space = std::make_unique<Space>(*mesh, config.degree);
    const Lifting lifting(*space);
    std::optional<DofField> guess;
    if (config.warm_start && prev_solution)
      guess = transfer_nested(*mesh, space->basis(), *prev_solution);
    DofField solution = space->make_scalar();
    LevelRow row = run_level(config, *mesh, *space, lifting,
                             static_cast<int>(i), guess, &solution);
    if (i > 0 && row.converged && result.rows.back().converged) {
      row.rate_l2 = std::log2(result.rows.back().err.l2 / row.err.l2);
      row.rate_energy = std::log2(result.rows.back().err.energy / row.err.energy);
    }
    result.rows.push_back(row);
    if (!row.converged) {
      result.all_converged = false;
      return result;
    }
    hs.push_back(row.h);
    e_l2.push_back(row.err.l2);
    e_en.push_back(row.err.energy);
    e_th.push_back(row.err.theta);
    e_sg.push_back(row.err.sigma);
    prev_solution.reset();  // drop before the spaces it references
    prev_mesh = std::move(mesh);
    prev_space = std::move(space);
    prev_solution = std::move(solution);
  }
  result.all_converged = true;
  result.slope_l2 = ls_slope(hs, e_l2);
  result.slope_energy = ls_slope(hs, e_en);
  result.slope_theta = ls_slope(hs, e_th);
  result.slope_sigma = ls_slope(hs, e_sg);
  return result;
}

void write_csv(std::ostream& os, const std::vector<LevelRow>& rows) {
  os << "level,h,elements,dofs,err_l2,err_energy,err_theta,err_sigma,"
        "rate_l2,rate_energy,newton_iters,converged\n";
  char buf[512];
  for (const LevelRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.12e,%ld,%ld,%.12e,%.12e,%.12e,%.12e,",
                  r.level, r.h, r.elements, r.dofs, r.err.l2, r.err.energy,
                  r.err.theta, r.err.sigma);
    os << buf;
    if (std::isnan(r.rate_l2))
      os << ",";
    else {
      std::snprintf(buf, sizeof buf, "%.6f,%.6f", r.rate_l2, r.rate_energy);
      os << buf;
    }
    std::snprintf(buf, sizeof buf, ",%d,%d\n", r.newton_iters, r.converged ? 1 : 0);
    os << buf;
  }
}

}  // namespace dgq
