// dg: command-line driver for the DG quasilinear elliptic solver.
//
//   dg solve    --model <name> --scheme br1|br2|sipg|ldg --degree q --n N
//   dg converge --model <name> --scheme ... --degree q --n N --levels K
//   dg sweep    --model <name> --scheme ... --degree q --n N
//   dg probe    --model <name> --degree q --n N
//
// Common flags: --penalty auto|<float>, --beta zero|switch|<float>,
// --tol <float>, --seed <int>, --mms sinsin|bubble, --out <path.csv>,
// --config <path.json> (JSON file mirroring the flags).
//
// Exit codes: 0 success, 2 config error, 3 solver non-convergence,
// 4 invariant violation detected during self-checks.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dgq/study.hpp"

namespace {

struct CliOptions {
  std::string command;
  std::string model = "poisson";
  std::string scheme = "sipg";
  int degree = 1;
  int n = 8;
  int levels = 0;
  std::string penalty = "auto";
  std::string beta = "zero";
  double tol = 1e-10;
  unsigned seed = 12345;
  std::string mms = "sinsin";
  std::string out;
  long samples = 2000;
  bool warm_start = false;
};

void apply_json_config(const std::string& path, CliOptions& opt) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  if (j.contains("model")) opt.model = j["model"].get<std::string>();
  if (j.contains("scheme")) opt.scheme = j["scheme"].get<std::string>();
  if (j.contains("degree")) opt.degree = j["degree"].get<int>();
  if (j.contains("n")) opt.n = j["n"].get<int>();
  if (j.contains("levels")) opt.levels = j["levels"].get<int>();
  if (j.contains("penalty"))
    opt.penalty = j["penalty"].is_number()
                      ? std::to_string(j["penalty"].get<double>())
                      : j["penalty"].get<std::string>();
  if (j.contains("beta"))
    opt.beta = j["beta"].is_number() ? std::to_string(j["beta"].get<double>())
                                     : j["beta"].get<std::string>();
  if (j.contains("tol")) opt.tol = j["tol"].get<double>();
  if (j.contains("seed")) opt.seed = j["seed"].get<unsigned>();
  if (j.contains("mms")) opt.mms = j["mms"].get<std::string>();
  if (j.contains("out")) opt.out = j["out"].get<std::string>();
  if (j.contains("samples")) opt.samples = j["samples"].get<long>();
  if (j.contains("warm_start")) opt.warm_start = j["warm_start"].get<bool>();
}

dgq::RunConfig to_run_config(const CliOptions& opt) {
  dgq::RunConfig cfg;
  cfg.model = opt.model;
  cfg.family = dgq::flux_family_from_string(opt.scheme);
  cfg.degree = opt.degree;
  if (opt.penalty == "auto") {
    cfg.penalty_auto = true;
  } else {
    cfg.penalty_auto = false;
    try {
      cfg.penalty_value = std::stod(opt.penalty);
    } catch (...) {
      throw std::invalid_argument("--penalty expects 'auto' or a number, got '" +
                                  opt.penalty + "'");
    }
  }
  if (opt.beta == "zero" || opt.beta == "switch") {
    cfg.beta_mode = opt.beta;
  } else {
    cfg.beta_mode = "explicit";
    try {
      cfg.beta_value = std::stod(opt.beta);
    } catch (...) {
      throw std::invalid_argument(
          "--beta expects 'zero', 'switch' or a number, got '" + opt.beta + "'");
    }
  }
  cfg.mms = opt.mms;
  cfg.newton.abs_tol = opt.tol;
  cfg.newton.rel_tol = opt.tol;
  cfg.seed = opt.seed;
  cfg.warm_start = opt.warm_start;
  if (opt.n < 1) throw std::invalid_argument("--n must be >= 1");
  if (opt.degree < 1) throw std::invalid_argument("--degree must be >= 1");
  return cfg;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write output file: " + path);
  out << content;
}

int cmd_solve(const CliOptions& opt) {
  dgq::RunConfig cfg = to_run_config(opt);
  cfg.levels = {opt.n};
  const dgq::LevelRow row = dgq::run_single(cfg, opt.n);
  std::ostringstream csv;
  dgq::write_csv(csv, {row});
  write_output(opt.out, csv.str());
  if (!row.converged) {
    std::cerr << "solver did not converge on n=" << opt.n << "\n";
    return 3;
  }
  std::fprintf(stderr, "n=%d dofs=%ld err_l2=%.6e err_energy=%.6e iters=%d\n",
               opt.n, row.dofs, row.err.l2, row.err.energy, row.newton_iters);
  return 0;
}

int cmd_converge(const CliOptions& opt) {
  dgq::RunConfig cfg = to_run_config(opt);
  const int levels = opt.levels > 0 ? opt.levels : 4;
  if (levels < 2)
    throw std::invalid_argument("--levels must be >= 2 for rate computation");
  cfg.levels.clear();
  for (int i = 0, n = opt.n; i < levels; ++i, n *= 2) cfg.levels.push_back(n);

  const dgq::StudyResult result = dgq::run_convergence(cfg);
  std::ostringstream csv;
  dgq::write_csv(csv, result.rows);
  if (result.all_converged) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "# slopes: l2=%.4f energy=%.4f theta=%.4f sigma=%.4f\n",
                  result.slope_l2, result.slope_energy, result.slope_theta,
                  result.slope_sigma);
    csv << buf;
  }
  write_output(opt.out, csv.str());

  std::fprintf(stderr, "%-6s %-12s %-12s %-8s %-12s %-8s\n", "level", "h",
               "err_l2", "rate", "err_energy", "rate");
  for (const auto& r : result.rows)
    std::fprintf(stderr, "%-6d %-12.4e %-12.4e %-8.3f %-12.4e %-8.3f\n", r.level,
                 r.h, r.err.l2, r.rate_l2, r.err.energy, r.rate_energy);
  if (result.all_converged)
    std::fprintf(stderr,
                 "least-squares slopes (finest 3 levels): L2 %.3f, energy %.3f, "
                 "theta %.3f, sigma %.3f\n",
                 result.slope_l2, result.slope_energy, result.slope_theta,
                 result.slope_sigma);
  return result.all_converged ? 0 : 3;
}

int cmd_sweep(const CliOptions& opt) {
  dgq::RunConfig base = to_run_config(opt);
  const std::vector<double> factors = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0};

  // resolve the reference penalty once
  const dgq::Mesh mesh = dgq::build_structured(opt.n);
  const dgq::Space space(mesh, opt.degree);
  const auto model = dgq::make_model(opt.model);
  const Eigen::VectorXd ref = dgq::resolve_penalties(
      space, *model, base.family, base.penalty_auto, base.penalty_value,
      base.safety, base.seed);
  if (ref.size() == 0)
    throw std::invalid_argument("sweep requires a penalized scheme (br2|sipg|ldg)");

  std::ostringstream csv;
  csv << "penalty,h,elements,dofs,err_l2,err_energy,err_theta,err_sigma,"
         "newton_iters,converged\n";
  bool all_ok = true;
  for (double f : factors) {
    dgq::RunConfig cfg = base;
    cfg.penalty_auto = false;
    cfg.penalty_value = f * ref[0];
    const dgq::LevelRow row = dgq::run_single(cfg, opt.n);
    all_ok &= row.converged;
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "%.12e,%.12e,%ld,%ld,%.12e,%.12e,%.12e,%.12e,%d,%d\n",
                  cfg.penalty_value, row.h, row.elements, row.dofs, row.err.l2,
                  row.err.energy, row.err.theta, row.err.sigma, row.newton_iters,
                  row.converged ? 1 : 0);
    csv << buf;
    std::fprintf(stderr, "penalty=%.4e converged=%d err_energy=%.6e iters=%d\n",
                 cfg.penalty_value, row.converged ? 1 : 0, row.err.energy,
                 row.newton_iters);
  }
  write_output(opt.out, csv.str());
  return all_ok ? 0 : 3;
}

int cmd_probe(const CliOptions& opt) {
  const auto model = dgq::make_model(opt.model);
  dgq::ProbeConfig pc;
  pc.sample_count = opt.samples;
  pc.seed = opt.seed;
  const dgq::AssumptionReport rep = dgq::probe_assumptions(*model, pc);

  const dgq::Mesh mesh = dgq::build_structured(opt.n);
  const dgq::Space space(mesh, opt.degree);
  const dgq::TraceConstants tc = dgq::estimate_trace_constants(space);

  // lifting identity self-check (defining moment identity on random data)
  const dgq::Lifting lifting(space);
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double max_defect = 0.0;
  for (int rep_i = 0; rep_i < 20; ++rep_i) {
    dgq::DofField u = space.make_scalar();
    for (auto& c : u.coeffs()) c = unif(rng);
    dgq::DofField tau = space.make_vector();
    for (auto& c : tau.coeffs()) c = unif(rng);
    const Eigen::VectorXd r = lifting.r_jump_operator() * u.coeffs();
    double lhs = space.sigma_dot(r, tau.coeffs());
    double rhs = 0.0;
    const int m = space.block();
    for (int e = 0; e < mesh.n_edges(); ++e) {
      const dgq::Edge& edge = mesh.edge(e);
      const dgq::Space::EdgeData& ed = space.edge(e);
      for (int g = 0; g < ed.weights.size(); ++g) {
        double jump = u.block(ed.sides[0].elem).dot(ed.sides[0].trace.col(g));
        Eigen::Vector2d avg(
            tau.block(ed.sides[0].elem).head(m).dot(ed.sides[0].trace.col(g)),
            tau.block(ed.sides[0].elem).tail(m).dot(ed.sides[0].trace.col(g)));
        if (!edge.is_boundary()) {
          jump -= u.block(ed.sides[1].elem).dot(ed.sides[1].trace.col(g));
          avg += Eigen::Vector2d(
              tau.block(ed.sides[1].elem).head(m).dot(ed.sides[1].trace.col(g)),
              tau.block(ed.sides[1].elem).tail(m).dot(ed.sides[1].trace.col(g)));
          avg *= 0.5;
        }
        rhs -= ed.weights[g] * jump * edge.normal.dot(avg);
      }
    }
    max_defect = std::max(max_defect,
                          std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }

  std::ostringstream txt;
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "model %s: lambda_hat=%.6g Lambda_hat=%.6g C_sm_hat=%.6g "
                "C_lc_hat=%.6g growth_c1=%.6g growth_ok=%d pairs=%ld skipped=%ld\n",
                opt.model.c_str(), rep.lambda_hat, rep.Lambda_hat, rep.c_sm_hat,
                rep.c_lc_hat, rep.growth_c1, rep.growth_ok ? 1 : 0,
                rep.pairs_used, rep.pairs_skipped);
  txt << buf;
  std::snprintf(buf, sizeof buf,
                "trace constants (n=%d, q=%d): C_r=%.12g C_R=%.12g\n", opt.n,
                opt.degree, tc.c_r, tc.c_R);
  txt << buf;
  std::snprintf(buf, sizeof buf,
                "lifting identity max relative defect (20 random inputs): %.3e\n",
                max_defect);
  txt << buf;
  std::snprintf(buf, sizeof buf,
                "mesh: h=%.6g bounded_variation=%.6g quasi_uniformity=%.6g\n",
                mesh.h_max(), mesh.bounded_variation_ratio(),
                mesh.quasi_uniformity_ratio());
  txt << buf;
  write_output(opt.out, txt.str());

  if (max_defect > 1e-10) {
    std::cerr << "lifting identity self-check failed\n";
    return 4;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discontinuous Galerkin solver for quasilinear elliptic problems"};
  app.require_subcommand(1);

  CliOptions opt;
  std::string config_path;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file mirroring the flags");
    cmd->add_option("--model", opt.model, "diffusion model name");
    cmd->add_option("--scheme", opt.scheme, "br1|br2|sipg|ldg");
    cmd->add_option("--degree", opt.degree, "polynomial degree q >= 1");
    cmd->add_option("--n", opt.n, "structured mesh size (n x n cells)");
    cmd->add_option("--penalty", opt.penalty, "auto or a positive value");
    cmd->add_option("--beta", opt.beta, "zero | switch | value (LDG)");
    cmd->add_option("--tol", opt.tol, "Newton residual tolerance");
    cmd->add_option("--seed", opt.seed, "random seed for probes");
    cmd->add_option("--mms", opt.mms, "manufactured solution: sinsin | bubble");
    cmd->add_option("--out", opt.out, "output CSV path (stdout when empty)");
  };

  CLI::App* solve = app.add_subcommand("solve", "single solve with error report");
  add_common(solve);
  CLI::App* converge =
      app.add_subcommand("converge", "convergence study over nested refinements");
  add_common(converge);
  converge->add_option("--levels", opt.levels, "number of levels (n doubles)");
  converge->add_flag("--warm-start", opt.warm_start,
                     "start each level from the transferred coarse solution");
  CLI::App* sweep = app.add_subcommand("sweep", "penalty sweep on a fixed mesh");
  add_common(sweep);
  CLI::App* probe =
      app.add_subcommand("probe", "model assumption and mesh/lifting probes");
  add_common(probe);
  probe->add_option("--samples", opt.samples, "Monte-Carlo sample count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // flag/subcommand problems are config errors
  }

  try {
    // JSON config provides defaults; explicit flags were already parsed into
    // opt, so apply the file first and re-parse to let flags win
    if (!config_path.empty()) {
      CliOptions from_file;
      apply_json_config(config_path, from_file);
      const CliOptions flag_values = opt;
      opt = from_file;
      CLI::App* sub = app.get_subcommands().front();
      auto keep = [&](const std::string& flag, auto member) {
        if (sub->count(flag) > 0) opt.*member = flag_values.*member;
      };
      keep("--model", &CliOptions::model);
      keep("--scheme", &CliOptions::scheme);
      keep("--degree", &CliOptions::degree);
      keep("--n", &CliOptions::n);
      keep("--penalty", &CliOptions::penalty);
      keep("--beta", &CliOptions::beta);
      keep("--tol", &CliOptions::tol);
      keep("--seed", &CliOptions::seed);
      keep("--mms", &CliOptions::mms);
      keep("--out", &CliOptions::out);
      if (sub->get_name() == "converge" && sub->count("--levels") > 0)
        opt.levels = flag_values.levels;
      if (sub->get_name() == "converge" && sub->count("--warm-start") > 0)
        opt.warm_start = flag_values.warm_start;
      if (sub->get_name() == "probe" && sub->count("--samples") > 0)
        opt.samples = flag_values.samples;
    }

    if (solve->parsed()) return cmd_solve(opt);
    if (converge->parsed()) return cmd_converge(opt);
    if (sweep->parsed()) return cmd_sweep(opt);
    if (probe->parsed()) return cmd_probe(opt);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const dgq::MeshError& e) {
    std::cerr << "mesh invariant violation: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
