#include "dgq/diffusion.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

namespace dgq {

namespace {

struct PoissonModel final : DiffusionModel {
  std::string name() const override { return "poisson"; }
  Eigen::Vector2d a(const Eigen::Vector2d&, double,
                    const Eigen::Vector2d& z) const override {
    return z;
  }
  Eigen::Vector2d a_u(const Eigen::Vector2d&, double,
                      const Eigen::Vector2d&) const override {
    return Eigen::Vector2d::Zero();
  }
  Eigen::Matrix2d a_z(const Eigen::Vector2d&, double,
                      const Eigen::Vector2d&) const override {
    return Eigen::Matrix2d::Identity();
  }
  std::optional<double> lambda() const override { return 1.0; }
  std::optional<double> Lambda() const override { return 1.0; }
  std::optional<double> monotonicity_constant() const override { return 1.0; }
  std::optional<double> lipschitz_constant() const override { return 1.0; }
};

// Mean curvature flow: a(z) = z / (1 + |z|)^{1/2}. The z-derivative has a
// removable 0/0 at z = 0; the analytic limit is the identity, which keeps
// Newton well defined at a zero initial guess.
struct MeanCurvatureModel final : DiffusionModel {
  std::string name() const override { return "meancurv"; }
  Eigen::Vector2d a(const Eigen::Vector2d&, double,
                    const Eigen::Vector2d& z) const override {
    return z / std::sqrt(1.0 + z.norm());
  }
  Eigen::Vector2d a_u(const Eigen::Vector2d&, double,
                      const Eigen::Vector2d&) const override {
    return Eigen::Vector2d::Zero();
  }
  Eigen::Matrix2d a_z(const Eigen::Vector2d&, double,
                      const Eigen::Vector2d& z) const override {
    const double t = z.norm();
    if (t == 0.0) return Eigen::Matrix2d::Identity();
    const double g = 1.0 / std::sqrt(1.0 + t);
    const double gp = -0.5 * std::pow(1.0 + t, -1.5);
    return g * Eigen::Matrix2d::Identity() + (gp / t) * (z * z.transpose());
  }
};

// p-Laplacian type a(z) = |z| z: monotone but degenerate (the ellipticity
// lower bound vanishes at z = 0, so BR2's penalty rule must reject it while
// SIPG still applies).
struct PLaplaceModel final : DiffusionModel {
  std::string name() const override { return "plaplace"; }
  Eigen::Vector2d a(const Eigen::Vector2d&, double,
                    const Eigen::Vector2d& z) const override {
    return z.norm() * z;
  }
  Eigen::Vector2d a_u(const Eigen::Vector2d&, double,
                      const Eigen::Vector2d&) const override {
    return Eigen::Vector2d::Zero();
  }
  Eigen::Matrix2d a_z(const Eigen::Vector2d&, double,
                      const Eigen::Vector2d& z) const override {
    const double t = z.norm();
    if (t == 0.0) return Eigen::Matrix2d::Zero();
    return t * Eigen::Matrix2d::Identity() + (z * z.transpose()) / t;
  }
  std::optional<double> lambda() const override { return 0.0; }
};

// Newtonian-type model a(x,u,z) = k(u) z with k(u) = 2 + sin u. Exercises a
// nonzero a_u; not monotone in general.
struct NewtonianModel final : DiffusionModel {
  std::string name() const override { return "newtonian"; }
  Eigen::Vector2d a(const Eigen::Vector2d&, double u,
                    const Eigen::Vector2d& z) const override {
    return (2.0 + std::sin(u)) * z;
  }
  Eigen::Vector2d a_u(const Eigen::Vector2d&, double u,
                      const Eigen::Vector2d& z) const override {
    return std::cos(u) * z;
  }
  Eigen::Matrix2d a_z(const Eigen::Vector2d&, double u,
                      const Eigen::Vector2d&) const override {
    return (2.0 + std::sin(u)) * Eigen::Matrix2d::Identity();
  }
  std::optional<double> lambda() const override { return 1.0; }
  std::optional<double> Lambda() const override { return 3.0; }
};

std::map<std::string, std::shared_ptr<const DiffusionModel>>& user_models() {
  static std::map<std::string, std::shared_ptr<const DiffusionModel>> registry;
  return registry;
}

}  // namespace

std::shared_ptr<const DiffusionModel> make_model(const std::string& name) {
  const auto it = user_models().find(name);
  if (it != user_models().end()) return it->second;
  if (name == "poisson") return std::make_shared<PoissonModel>();
  if (name == "meancurv") return std::make_shared<MeanCurvatureModel>();
  if (name == "newtonian") return std::make_shared<NewtonianModel>();
  if (name == "plaplace") return std::make_shared<PLaplaceModel>();
  std::string msg = "unknown model '" + name + "'; registered models:";
  for (const auto& m : registered_models()) msg += " " + m;
  throw std::invalid_argument(msg);
}

std::vector<std::string> registered_models() {
  std::vector<std::string> names = {"poisson", "meancurv", "newtonian",
                                    "plaplace"};
  for (const auto& [name, model] : user_models())
    if (std::find(names.begin(), names.end(), name) == names.end())
      names.push_back(name);
  return names;
}

void register_model(std::shared_ptr<const DiffusionModel> model) {
  if (!model) throw std::invalid_argument("register_model: null model");
  user_models()[model->name()] = std::move(model);
}

EvalResult eval_model(const DiffusionModel& model, const Eigen::Vector2d& x,
                      double u, const Eigen::Vector2d& z) {
  if (!x.allFinite() || !std::isfinite(u) || !z.allFinite())
    throw std::invalid_argument("eval_model: non-finite input");
  return {model.a(x, u, z), model.a_u(x, u, z), model.a_z(x, u, z)};
}

AssumptionReport probe_assumptions(const DiffusionModel& model,
                                   const ProbeConfig& config) {
  if (config.sample_count < 1)
    throw std::invalid_argument("probe_assumptions: sample_count must be >= 1");
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);

  auto rand_x = [&] { return Eigen::Vector2d(unit(rng), unit(rng)); };
  auto rand_u = [&] { return config.state_radius * sym(rng); };
  auto rand_z = [&] {
    Eigen::Vector2d z(sym(rng), sym(rng));
    while (z.norm() > 1.0) z = Eigen::Vector2d(sym(rng), sym(rng));
    return Eigen::Vector2d(config.gradient_radius * z);
  };

  AssumptionReport rep;
  rep.c_sm_hat = std::numeric_limits<double>::max();
  rep.lambda_hat = std::numeric_limits<double>::max();
  rep.Lambda_hat = -std::numeric_limits<double>::max();

  for (long i = 0; i < config.sample_count; ++i) {
    const Eigen::Vector2d x = rand_x();
    const double xi = rand_u();
    // every fourth pair reuses xi so the Lipschitz ratio probes the pure
    // gradient direction, and every eighth reuses eta (skipped for the
    // monotonicity ratio)
    const double xi2 = (i % 4 == 0) ? xi : rand_u();
    const Eigen::Vector2d eta = rand_z();
    const Eigen::Vector2d eta2 = (i % 8 == 5) ? eta : rand_z();

    const Eigen::Vector2d da = model.a(x, xi2, eta2) - model.a(x, xi, eta);
    const double dz2 = (eta2 - eta).squaredNorm();
    if (dz2 > 0.0) {
      rep.c_sm_hat = std::min(rep.c_sm_hat, da.dot(eta2 - eta) / dz2);
      ++rep.pairs_used;
    } else {
      ++rep.pairs_skipped;
    }
    const double dist2 = (xi2 - xi) * (xi2 - xi) + dz2;
    if (dist2 > 0.0)
      rep.c_lc_hat = std::max(rep.c_lc_hat, da.norm() / std::sqrt(dist2));

    const Eigen::Matrix2d az = model.a_z(x, xi, eta);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(0.5 * (az + az.transpose()));
    rep.lambda_hat = std::min(rep.lambda_hat, es.eigenvalues().minCoeff());
    rep.Lambda_hat = std::max(rep.Lambda_hat, es.eigenvalues().maxCoeff());

    const Eigen::Vector2d av = model.a(x, xi, eta);
    const double growth_denom = 1.0 + std::abs(xi) + std::abs(eta.x()) +
                                std::abs(eta.y());
    rep.growth_c1 = std::max(rep.growth_c1,
                             av.cwiseAbs().maxCoeff() / growth_denom);
  }
  rep.growth_ok = std::isfinite(rep.growth_c1);
  return rep;
}

ExactSolution make_exact_solution(const std::string& name) {
  const double pi = std::numbers::pi;
  if (name == "sinsin") {
    ExactSolution s;
    s.name = name;
    s.u = [pi](const Eigen::Vector2d& x) {
      return std::sin(pi * x.x()) * std::sin(pi * x.y());
    };
    s.grad = [pi](const Eigen::Vector2d& x) {
      return Eigen::Vector2d(pi * std::cos(pi * x.x()) * std::sin(pi * x.y()),
                             pi * std::sin(pi * x.x()) * std::cos(pi * x.y()));
    };
    s.hessian = [pi](const Eigen::Vector2d& x) {
      Eigen::Matrix2d h;
      const double sx = std::sin(pi * x.x()), cx = std::cos(pi * x.x());
      const double sy = std::sin(pi * x.y()), cy = std::cos(pi * x.y());
      h(0, 0) = -pi * pi * sx * sy;
      h(1, 1) = -pi * pi * sx * sy;
      h(0, 1) = h(1, 0) = pi * pi * cx * cy;
      return h;
    };
    return s;
  }
  if (name == "bubble") {
    ExactSolution s;
    s.name = name;
    s.u = [](const Eigen::Vector2d& p) {
      return p.x() * (1.0 - p.x()) * p.y() * (1.0 - p.y());
    };
    s.grad = [](const Eigen::Vector2d& p) {
      return Eigen::Vector2d((1.0 - 2.0 * p.x()) * p.y() * (1.0 - p.y()),
                             p.x() * (1.0 - p.x()) * (1.0 - 2.0 * p.y()));
    };
    s.hessian = [](const Eigen::Vector2d& p) {
      Eigen::Matrix2d h;
      h(0, 0) = -2.0 * p.y() * (1.0 - p.y());
      h(1, 1) = -2.0 * p.x() * (1.0 - p.x());
      h(0, 1) = h(1, 0) = (1.0 - 2.0 * p.x()) * (1.0 - 2.0 * p.y());
      return h;
    };
    return s;
  }
  throw std::invalid_argument("unknown exact solution '" + name +
                              "'; available: sinsin, bubble");
}

ManufacturedProblem make_manufactured(std::shared_ptr<const DiffusionModel> model,
                                      const ExactSolution& exact) {
  // homogeneous Dirichlet data required
  const int n_check = 64;
  for (int i = 0; i <= n_check; ++i) {
    const double t = double(i) / n_check;
    for (const Eigen::Vector2d& p :
         {Eigen::Vector2d(t, 0.0), Eigen::Vector2d(t, 1.0),
          Eigen::Vector2d(0.0, t), Eigen::Vector2d(1.0, t)}) {
      if (std::abs(exact.u(p)) > 1e-12)
        throw std::invalid_argument(
            "make_manufactured: exact solution does not vanish on the boundary");
    }
  }

  ManufacturedProblem prob;
  prob.model = model;
  prob.exact = exact;
  auto m = model;
  auto ex = exact;
  prob.f = [m, ex](const Eigen::Vector2d& x) {
    const double u = ex.u(x);
    const Eigen::Vector2d g = ex.grad(x);
    const Eigen::Matrix2d h = ex.hessian(x);
    const Eigen::Matrix2d az = m->a_z(x, u, g);
    double div = m->explicit_x_divergence(x, u, g) + m->a_u(x, u, g).dot(g);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) div += az(i, j) * h(j, i);
    return -div;
  };
  return prob;
}

}  // namespace dgq
