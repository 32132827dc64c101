#include <benchmark/benchmark.h>

#include <random>

#include "dgq/newton.hpp"
#include "dgq/study.hpp"

namespace {

struct Fixture {
  dgq::Mesh mesh;
  dgq::Space space;
  dgq::Lifting lifting;
  std::shared_ptr<const dgq::DiffusionModel> model;
  dgq::Scheme scheme;
  dgq::DofField state;
  Eigen::VectorXd rhs;

  Fixture(int n, int q, dgq::FluxFamily family)
      : mesh(dgq::build_structured(n)),
        space(mesh, q),
        lifting(space),
        model(dgq::make_model("meancurv")),
        scheme(space, lifting, model,
               [&] {
                 dgq::SchemeConfig sc;
                 sc.family = family;
                 sc.degree = q;
                 sc.penalty = dgq::resolve_penalties(space, *model, family, true,
                                                     0.0, 1.5);
                 return sc;
               }()),
        state(space.make_scalar()),
        rhs(Eigen::VectorXd::Zero(space.dim_v())) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> unif(-0.1, 0.1);
    for (auto& c : state.coeffs()) c = unif(rng);
  }
};

dgq::FluxFamily family_of(int i) {
  switch (i) {
    case 0: return dgq::FluxFamily::BR1;
    case 1: return dgq::FluxFamily::BR2;
    case 2: return dgq::FluxFamily::SIPG;
    default: return dgq::FluxFamily::LDG;
  }
}

void BM_Residual(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)), 2, family_of(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.scheme.residual(f.state, f.rhs));
  }
  state.SetLabel(dgq::to_string(family_of(state.range(1))));
}
BENCHMARK(BM_Residual)->ArgsProduct({{8, 16}, {0, 1, 2, 3}})
    ->Unit(benchmark::kMillisecond);

void BM_Jacobian(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)), 2, family_of(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.scheme.jacobian(f.state));
  }
  state.SetLabel(dgq::to_string(family_of(state.range(1))));
}
BENCHMARK(BM_Jacobian)->ArgsProduct({{8, 16}, {0, 1, 2, 3}})
    ->Unit(benchmark::kMillisecond);

void BM_NewtonSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Fixture f(n, 2, dgq::FluxFamily::SIPG);
  const auto problem = dgq::make_manufactured(
      f.model, dgq::make_exact_solution("sinsin"));
  const Eigen::VectorXd rhs = f.scheme.rhs(problem.f);
  for (auto _ : state) {
    auto [u, report] = dgq::newton_solve(f.scheme, rhs);
    benchmark::DoNotOptimize(report.converged);
  }
}
BENCHMARK(BM_NewtonSolve)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_TraceConstants(benchmark::State& state) {
  const dgq::Mesh mesh = dgq::build_structured(static_cast<int>(state.range(0)));
  const dgq::Space space(mesh, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dgq::estimate_trace_constants(space));
  }
}
BENCHMARK(BM_TraceConstants)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
