#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dgq {

/// Diffusion operator a(x,u,z) of the quasilinear problem
/// -div a(x, u, grad u) = f, together with its partial derivatives.
/// Models are pure functions of their inputs and safe to evaluate
/// concurrently.
class DiffusionModel {
 public:
  virtual ~DiffusionModel() = default;

  virtual std::string name() const = 0;

  virtual Eigen::Vector2d a(const Eigen::Vector2d& x, double u,
                            const Eigen::Vector2d& z) const = 0;
  /// derivative with respect to the state u
  virtual Eigen::Vector2d a_u(const Eigen::Vector2d& x, double u,
                              const Eigen::Vector2d& z) const = 0;
  /// derivative with respect to the gradient slot, 2x2 (symmetric when
  /// declared so)
  virtual Eigen::Matrix2d a_z(const Eigen::Vector2d& x, double u,
                              const Eigen::Vector2d& z) const = 0;
  /// sum_i d a_i / d x_i at frozen (u,z); zero unless the model depends on x
  /// explicitly. Used only to manufacture forcings.
  virtual double explicit_x_divergence(const Eigen::Vector2d&, double,
                                       const Eigen::Vector2d&) const {
    return 0.0;
  }

  /// a(x,u,0) = 0 for all x,u (no diffusion without a gradient)
  virtual bool zero_at_zero_gradient() const { return true; }
  virtual bool symmetric_a_z() const { return true; }

  /// declared ellipticity bounds lambda <= eig(a_z) <= Lambda, when known
  virtual std::optional<double> lambda() const { return std::nullopt; }
  virtual std::optional<double> Lambda() const { return std::nullopt; }
  virtual std::optional<double> monotonicity_constant() const { return std::nullopt; }
  virtual std::optional<double> lipschitz_constant() const { return std::nullopt; }
};

/// Built-in models: "poisson" (a = z), "meancurv" (a = z / (1+|z|)^{1/2}),
/// "newtonian" (a = (2 + sin u) z). Throws std::invalid_argument for unknown
/// names; registered_models() lists the valid ones.
std::shared_ptr<const DiffusionModel> make_model(const std::string& name);
std::vector<std::string> registered_models();

/// Registers a user model under its name() for lookup by make_model.
/// Re-registering a name (including a built-in one) replaces it.
void register_model(std::shared_ptr<const DiffusionModel> model);

struct EvalResult {
  Eigen::Vector2d a;
  Eigen::Vector2d a_u;
  Eigen::Matrix2d a_z;
};
/// Evaluates a, a_u, a_z at once; rejects non-finite inputs.
EvalResult eval_model(const DiffusionModel& model, const Eigen::Vector2d& x,
                      double u, const Eigen::Vector2d& z);

/// Monte-Carlo estimates of the structural constants over random states.
/// The estimates are empirical bounds (sampled extrema), not certified ones.
struct AssumptionReport {
  double lambda_hat = 0.0;     // min eigenvalue of a_z over samples
  double Lambda_hat = 0.0;     // max eigenvalue of a_z over samples
  double c_sm_hat = 0.0;       // min secant monotonicity ratio
  double c_lc_hat = 0.0;       // max secant Lipschitz ratio
  double growth_c1 = 0.0;      // fitted constant of the linear growth bound
  bool growth_ok = false;
  long pairs_used = 0;
  long pairs_skipped = 0;      // degenerate eta = eta' pairs
};

struct ProbeConfig {
  long sample_count = 2000;
  double state_radius = 10.0;    // |u| bound for sampled states
  double gradient_radius = 10.0; // |z| bound (keeps probes away from overflow)
  unsigned seed = 12345;
};

AssumptionReport probe_assumptions(const DiffusionModel& model,
                                   const ProbeConfig& config = {});

/// Exact solution with analytic derivatives, vanishing on the boundary of
/// the unit square.
struct ExactSolution {
  std::string name;
  std::function<double(const Eigen::Vector2d&)> u;
  std::function<Eigen::Vector2d(const Eigen::Vector2d&)> grad;
  std::function<Eigen::Matrix2d(const Eigen::Vector2d&)> hessian;
};

/// "sinsin": sin(pi x) sin(pi y); "bubble": x(1-x) y(1-y).
ExactSolution make_exact_solution(const std::string& name);

/// Manufactured problem: forcing f = -div a(x, u, grad u) expanded by the
/// chain rule so the discrete error can be measured against the analytic u.
struct ManufacturedProblem {
  std::shared_ptr<const DiffusionModel> model;
  ExactSolution exact;
  std::function<double(const Eigen::Vector2d&)> f;

  Eigen::Vector2d flux(const Eigen::Vector2d& x) const {
    return model->a(x, exact.u(x), exact.grad(x));
  }
};

/// Builds the forcing by the chain rule; rejects exact solutions that do not
/// vanish on the boundary of the unit square (checked at sample points).
ManufacturedProblem make_manufactured(std::shared_ptr<const DiffusionModel> model,
                                      const ExactSolution& exact);

}  // namespace dgq
