#include <benchmark/benchmark.h>

#include "priorplug/density.hpp"
#include "priorplug/detector.hpp"
#include "priorplug/divergences.hpp"
#include "priorplug/estimators.hpp"
#include "priorplug/experiments.hpp"
#include "priorplug/margin.hpp"
#include "priorplug/random.hpp"

using namespace priorplug;

namespace {

const Scenario& gaussian() {
  static const Scenario s(DensityPair::gaussian(0, 2, 1), 0.3, 0.1);
  return s;
}

const Scenario& piecewise() {
  static const Scenario s(build_appendix_a(3, 0.01, 0.3), 0.5, 0.1);
  return s;
}

void BM_RiskClosedForm(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(risk_report(gaussian(), 0.35).risk);
}
BENCHMARK(BM_RiskClosedForm);

void BM_RiskQuadrature(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(risk_report(piecewise(), 0.52).risk);
}
BENCHMARK(BM_RiskQuadrature);

void BM_SampleUnlabeled(benchmark::State& state) {
  RandomStream rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_unlabeled(piecewise(), n, rng).x.data());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleUnlabeled)->Arg(256)->Arg(4096);

void BM_MleUnlabeled(benchmark::State& state) {
  RandomStream rng(2);
  const auto x = sample_unlabeled(gaussian(), static_cast<std::size_t>(state.range(0)), rng).x;
  for (auto _ : state) benchmark::DoNotOptimize(mle_unlabeled(gaussian().pair(), x, 0.1).q_hat);
}
BENCHMARK(BM_MleUnlabeled)->Arg(64)->Arg(1024)->Arg(16384);

void BM_MarginProbability(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(margin_probability(gaussian(), 0.05));
}
BENCHMARK(BM_MarginProbability);

void BM_HellingerSq(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(hellinger_sq(gaussian().pair()).value);
}
BENCHMARK(BM_HellingerSq);

void BM_ExcessRiskCurve(benchmark::State& state) {
  ExperimentConfig c{.scenario = gaussian()};
  c.mode = state.range(0) == 0 ? EstimatorMode::labeled : EstimatorMode::unlabeled;
  c.n_grid = {64, 256};
  c.trials = 200;
  for (auto _ : state) benchmark::DoNotOptimize(run_excess_risk_curve(c).points.data());
}
BENCHMARK(BM_ExcessRiskCurve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
