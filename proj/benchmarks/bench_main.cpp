#include <benchmark/benchmark.h>

#include "fplab/approximate.hpp"
#include "fplab/jets.hpp"
#include "fplab/operators.hpp"

namespace {

void BM_AtomSumEval(benchmark::State& state) {
  fplab::AtomSum u;
  for (int j = 0; j < 32; ++j) {
    fplab::Direction d({0.01 * j - 0.15, 0.02 * j - 0.3});
    if (d.norm() < 1e-3) d = fplab::Direction({0.1, 0.1});
    u.atoms.push_back(fplab::Atom{1.0 + j, d, 0.5});
  }
  const std::vector<double> x = {0.3, -0.2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(fplab::atom_sum_eval(u, x));
  }
}
BENCHMARK(BM_AtomSumEval);

void BM_RampPrincipalValue(benchmark::State& state) {
  const fplab::Params prm{0.5, 2.0, 1};
  const fplab::QuadratureSpec spec;
  const auto u = fplab::ramp_field(prm.s);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fplab::fractional_p_laplacian_1d(u, 1.0, prm, spec));
  }
}
BENCHMARK(BM_RampPrincipalValue)->Unit(benchmark::kMillisecond);

void BM_SplitIntegrals(benchmark::State& state) {
  const fplab::QuadratureSpec spec;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fplab::ramp_split_integrals(0.5, 3.0, spec));
  }
}
BENCHMARK(BM_SplitIntegrals)->Unit(benchmark::kMillisecond);

void BM_PlanarPrincipalValue(benchmark::State& state) {
  const fplab::Params prm{0.5, 2.0, 2};
  fplab::QuadratureSpec spec;
  spec.pv_epsilons = {1e-2, 1e-3, 1e-4, 1e-5};
  spec.panel_tol = 1e-9;
  const auto u = fplab::ramp_field_nd(2, prm.s);
  const std::vector<double> x = {0.3, -0.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(fplab::fractional_p_laplacian_nd(u, x, prm, spec));
  }
}
BENCHMARK(BM_PlanarPrincipalValue)->Unit(benchmark::kMillisecond);

void BM_JetSolve(benchmark::State& state) {
  const int d = 2;
  const int m = 3;
  const auto dirs = fplab::default_directions(d, m, 20, 7);
  const auto sys = fplab::build_jet_system(dirs, 0.5, m);
  fplab::MultiIndex gamma({2, 0});
  const auto target = fplab::Jet::monomial(gamma, m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fplab::solve_jet(sys, target));
  }
}
BENCHMARK(BM_JetSolve)->Unit(benchmark::kMicrosecond);

void BM_ApproximateLinear(benchmark::State& state) {
  const fplab::Params prm{0.5, 2.0, 2};
  fplab::ApproxConfig cfg;
  cfg.seed = 42;
  const auto f = fplab::builtin_target("x1", 2, prm.s);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fplab::approximate(f, 0, 0.1, prm, cfg));
  }
}
BENCHMARK(BM_ApproximateLinear)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
