#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "heis/analysis.hpp"
#include "heis/expm.hpp"
#include "heis/group.hpp"
#include "heis/induced.hpp"

using namespace heis;

namespace {

LinearField sample_field() {
  Mat2 A;
  A << 0.4, -1.1, 0.7, 0.3;
  return {A, {0.5, -0.2}};
}

void BM_Multiply(benchmark::State& state) {
  GroupElement g{0.3, -1.2, 0.7}, h{1.1, 0.4, -0.2};
  for (auto _ : state) {
    g = multiply(g, h);
    benchmark::DoNotOptimize(g);
  }
}
BENCHMARK(BM_Multiply);

void BM_ExpTD(benchmark::State& state) {
  const auto X = sample_field();
  double t = 0.0;
  for (auto _ : state) {
    t += 1e-3;
    benchmark::DoNotOptimize(exp_tD(X, t));
  }
}
BENCHMARK(BM_ExpTD);

void BM_SeriesExpm(benchmark::State& state) {
  const Mat3 D = sample_field().derivation() * 1.7;
  for (auto _ : state) benchmark::DoNotOptimize(expm(D));
}
BENCHMARK(BM_SeriesExpm);

// Apply one precomputed flow map to a batch of points.
void BM_FlowMapBatch(benchmark::State& state) {
  const auto phi = flow_map(sample_field(), 0.8);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2, 2);
  std::vector<GroupElement> pts(static_cast<std::size_t>(state.range(0)));
  for (auto& p : pts) p = {u(rng), u(rng), u(rng)};
  for (auto _ : state) {
    for (const auto& p : pts) benchmark::DoNotOptimize(phi(p));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FlowMapBatch)->Arg(1 << 10)->Arg(1 << 14);

void BM_ConjugationResidual(benchmark::State& state) {
  Mat2 A;
  A << 0.6, 0.0, 0.0, -0.6;
  const LinearField X{A, {0.0, 0.4}};
  const std::vector<AlgebraElement> Bs = {{0.3, 1.0, -0.2}};
  const auto signal = ControlSignal::constant(1.0, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(conjugation_residual(X, Bs, 1, {0.2, 0.1, -0.3}, signal, 1e-3));
  }
}
BENCHMARK(BM_ConjugationResidual)->Unit(benchmark::kMillisecond);

void BM_ControlSetGrid(benchmark::State& state) {
  Sigma11Params P;
  P.lambda = 1;
  P.b = 1;
  P.a = 1;
  GridConfig cfg;
  cfg.s_cells = static_cast<int>(state.range(0));
  cfg.t_cells = static_cast<int>(state.range(0));
  const auto box = ControlBox::interval(-1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(control_set_estimate(P, box, cfg).occupied_count());
}
BENCHMARK(BM_ControlSetGrid)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
