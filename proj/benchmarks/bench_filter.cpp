#include <benchmark/benchmark.h>

#include <vector>

#include "pswarm/models.hpp"
#include "pswarm/sisr.hpp"
#include "pswarm/swarm.hpp"

namespace {

using namespace pswarm;

void BM_PhiloxNormal(benchmark::State& state) {
  RngStream rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(rng.normal());
}
BENCHMARK(BM_PhiloxNormal);

void BM_SplitStream(benchmark::State& state) {
  const RngStream root(1);
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(root.split(i++).split(7));
}
BENCHMARK(BM_SplitStream);

void BM_ResampleMultinomial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  RngStream rng(2);
  std::vector<double> log_weights(n);
  for (auto& lw : log_weights) lw = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(resample_multinomial(log_weights, n, rng));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ResampleMultinomial)->Range(256, 65536);

void BM_SvFilterStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ModelSpec spec = sv_model();
  const ParamVec theta = SvParams{}.to_params();
  const std::vector<FilterFunctional> fs{sv_f1(), sv_f2()};
  const auto y = simulate(spec, theta, 2, RngStream(3)).observations.values;
  ParticleFilter filter(n);
  FilterEstimates out;
  filter.initialize(spec, theta, ObsView(&y[0], 1), fs, RngStream(4), out);
  std::uint64_t t = 2;
  for (auto _ : state) {
    filter.advance(spec, theta, ObsView(&y[1], 1), fs, RngStream(5).split(t++), out);
    benchmark::DoNotOptimize(out.phi_hat.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SvFilterStep)->Range(100, 10000);

void BM_SvSwarmAdvance(benchmark::State& state) {
  const auto n_theta = static_cast<std::size_t>(state.range(0));
  const ModelSpec spec = sv_model();
  const PriorSpec prior = SvPrior{}.to_prior_spec();
  SwarmConfig cfg;
  cfg.n_theta = n_theta;
  cfg.n_particles = 100;
  cfg.functionals = {sv_f1(), sv_f2()};
  const auto y = simulate(spec, SvParams{}.to_params(), 2, RngStream(6)).observations.values;
  auto [swarm, first] = instantiate_swarm(spec, prior, cfg, ObsView(&y[0], 1));
  for (auto _ : state) benchmark::DoNotOptimize(advance_swarm(spec, swarm, ObsView(&y[1], 1), cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 100);
}
BENCHMARK(BM_SvSwarmAdvance)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
