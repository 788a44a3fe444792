#include <benchmark/benchmark.h>

#include "plp/bayes.hpp"
#include "plp/burr.hpp"
#include "plp/datasets.hpp"
#include "plp/montecarlo.hpp"
#include "plp/prior.hpp"
#include "plp/simulate.hpp"

namespace {

using namespace plp;

void bm_mle_crow(benchmark::State& state)
{
  const auto data = datasets::crow_1974();
  for (auto _ : state) {
    const double b = mle_beta(data);
    benchmark::DoNotOptimize(mle_theta(data, b));
  }
}
BENCHMARK(bm_mle_crow);

void bm_simulate(benchmark::State& state)
{
  RandomStream rng(1);
  const PlpParams params(0.7054, 1.7441);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_failure_times(params, static_cast<std::size_t>(state.range(0)), rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_simulate)->Arg(40)->Arg(160)->Arg(2000);

void bm_ht_estimate(benchmark::State& state)
{
  const auto kind = static_cast<priors::PriorKind>(state.range(0));
  const auto data = datasets::crow_1974();
  priors::PriorFactory factory(mle_beta_trajectory(data, 5));
  const bayes::PosteriorSpec spec{data, mle_theta(data, mle_beta(data)), factory.make(kind)};
  const auto posterior = bayes::make_log_posterior(spec);
  state.SetLabel(std::string(priors::prior_kind_name(kind)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bayes::ht_bayes_estimate(posterior, bayes::HtLoss{}));
  }
}
BENCHMARK(bm_ht_estimate)->DenseRange(0, 4)->Unit(benchmark::kMicrosecond);

void bm_burr_fit(benchmark::State& state)
{
  const auto sample = mle_beta_trajectory(datasets::crow_1974(), 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(priors::burr_fit(sample));
  }
}
BENCHMARK(bm_burr_fit)->Unit(benchmark::kMillisecond);

void bm_campaign_cell(benchmark::State& state)
{
  priors::PriorFactory factory(mle_beta_trajectory(datasets::crow_1974(), 5));
  montecarlo::SimConfig c;
  c.theta_values = {1.7441};
  c.sample_sizes = {40};
  c.replicates = 100;
  c.priors = {{"burr", factory.make(priors::PriorKind::burr)}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(montecarlo::run_campaign(c));
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(bm_campaign_cell)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
