#include <benchmark/benchmark.h>

#include "adclin/design.hpp"
#include "adclin/harness.hpp"
#include "adclin/linearizer.hpp"
#include "adclin/signals.hpp"

using namespace adclin;

namespace {

SignalPair default_signal() {
  ExperimentConfig cfg = ExperimentConfig::defaults();
  return make_eval_signal(cfg, 0);
}

void BM_GenMultitone(benchmark::State& state) {
  const MultiToneSpec spec = MultiToneSpec::ofdm_quadrature(qpsk_phases(1, 31), 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(gen_multitone(spec, static_cast<std::size_t>(state.range(0))));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenMultitone)->Arg(8192);

void BM_ProposedForward(benchmark::State& state) {
  const SignalPair p = default_signal();
  const int n = static_cast<int>(state.range(0));
  const ProposedParams params{0.0, 0.01, std::vector<double>(n, 0.01), bias_grid(0.75, n), NonlinearityKind::Abs};
  for (auto _ : state) benchmark::DoNotOptimize(proposed_forward(params, p.distorted));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(p.distorted.size()));
}
BENCHMARK(BM_ProposedForward)->Arg(4)->Arg(16)->Arg(24);

void BM_HammersteinForward(benchmark::State& state) {
  const SignalPair p = default_signal();
  const HammersteinParams params{0.0, 0.01, std::vector<double>(static_cast<std::size_t>(state.range(0) - 1), 0.01)};
  for (auto _ : state) benchmark::DoNotOptimize(hammerstein_forward(params, p.distorted));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(p.distorted.size()));
}
BENCHMARK(BM_HammersteinForward)->Arg(5)->Arg(13);

void BM_DesignProposed(benchmark::State& state) {
  const TrainingSet t = make_training_set(ExperimentConfig::defaults());
  DesignConfig cfg;
  cfg.n_branches = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(design_proposed(t.refs, t.distorted, cfg));
}
BENCHMARK(BM_DesignProposed)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
