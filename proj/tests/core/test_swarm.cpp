#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "pswarm/errors.hpp"
#include "pswarm/kalman.hpp"
#include "pswarm/models.hpp"
#include "pswarm/swarm.hpp"
#include "support/stats.hpp"

namespace pswarm {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

const LgParams kLg{0.9, 1.0, 1.0, 1.0, 0.0, 1.0};

std::vector<double> lg_data(std::size_t length, std::uint64_t seed = 200) {
  return simulate(lg_model(), kLg.to_params(), length, RngStream(seed)).observations.values;
}

SwarmConfig small_config(std::size_t n_theta, std::size_t n_particles, std::uint64_t seed = 7) {
  SwarmConfig cfg;
  cfg.n_theta = n_theta;
  cfg.n_particles = n_particles;
  cfg.seed = seed;
  cfg.functionals = {state_component(0), lg_f2()};
  cfg.report_marginal_likelihood = true;
  return cfg;
}

// Runs the swarm over all of `y` and returns every step's estimate.
std::vector<SwarmEstimate> run_swarm(const ModelSpec& spec, const PriorSpec& prior, const SwarmConfig& cfg,
                                     const std::vector<double>& y, const Executor& executor = Executor::serial()) {
  auto [state, first] = instantiate_swarm(spec, prior, cfg, ObsView(&y[0], 1), executor);
  std::vector<SwarmEstimate> out{first};
  for (std::size_t t = 1; t < y.size(); ++t) out.push_back(advance_swarm(spec, state, ObsView(&y[t], 1), cfg, executor));
  return out;
}

PriorSpec box_over_a() {
  auto lo = kLg.to_params();
  auto hi = kLg.to_params();
  lo[0] = 0.5;
  hi[0] = 0.95;
  return uniform_box_prior(lo, hi);
}

TEST(Combine, WeightedAverage) {
  const std::vector<double> values{1.0, 2.0, 3.0};
  const std::vector<double> log_rn{std::log(0.5), std::log(1.0), std::log(1.5)};
  EXPECT_NEAR(combine(values, log_rn), 7.0 / 3.0, 1e-15);
}

TEST(Combine, SingleFilterAndConstants) {
  EXPECT_DOUBLE_EQ(combine(std::vector<double>{4.5}, std::vector<double>{0.0}), 4.5);
  const std::vector<double> twos(9, 2.0), zeros(9, 0.0);
  EXPECT_DOUBLE_EQ(combine(twos, zeros), 2.0);
}

TEST(Combine, PermutationInvariant) {
  std::vector<double> values{0.3, -1.2, 8.0, 1e-4, 2.5};
  std::vector<double> log_rn{0.1, -0.4, 0.0, 0.3, -1.0};
  const double reference = combine(values, log_rn);
  std::vector<std::size_t> order{0, 1, 2, 3, 4};
  while (std::next_permutation(order.begin(), order.end())) {
    std::vector<double> v, l;
    for (std::size_t i : order) {
      v.push_back(values[i]);
      l.push_back(log_rn[i]);
    }
    ASSERT_NEAR(combine(v, l), reference, 1e-15);
  }
}

TEST(Combine, RejectsMismatchedLengths) {
  EXPECT_THROW(combine(std::vector<double>{1.0}, std::vector<double>{0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(combine(std::vector<double>{}, std::vector<double>{}), std::invalid_argument);
}

TEST(Swarm, SingletonMatchesItsOwnFilter) {
  const auto y = lg_data(20);
  const SwarmConfig cfg = small_config(1, 300);
  const auto estimates = run_swarm(lg_model(), point_prior(kLg.to_params()), cfg, y);
  const FilterRun direct = run_filter(lg_model(), kLg.to_params(), 300, y, cfg.functionals, filter_stream(cfg, 0));
  for (std::size_t t = 0; t < y.size(); ++t) {
    ASSERT_EQ(estimates[t].value, direct.steps[t].phi_hat);
  }
  EXPECT_NEAR(*estimates.back().log_marginal_lik, direct.log_likelihood, 1e-12);
}

TEST(Swarm, PerFilterEstimatesMatchIndependentRuns) {
  const auto y = lg_data(10);
  const SwarmConfig cfg = small_config(6, 100);
  const PriorSpec prior = box_over_a();
  auto [state, first] = instantiate_swarm(lg_model(), prior, cfg, ObsView(&y[0], 1));
  std::vector<SwarmEstimate> all{first};
  for (std::size_t t = 1; t < y.size(); ++t) all.push_back(advance_swarm(lg_model(), state, ObsView(&y[t], 1), cfg));
  for (std::size_t i = 0; i < cfg.n_theta; ++i) {
    RngStream ps = parameter_stream(cfg, i);
    ASSERT_EQ(state.params[i], prior.sample_rho(ps));
    const FilterRun direct = run_filter(lg_model(), state.params[i], 100, y, cfg.functionals, filter_stream(cfg, i));
    for (std::size_t t = 0; t < y.size(); ++t) {
      ASSERT_EQ(all[t].per_filter[0][i], direct.steps[t].phi_hat[0]);
      ASSERT_EQ(all[t].per_filter[1][i], direct.steps[t].phi_hat[1]);
    }
  }
}

TEST(Swarm, ProposalEqualToPriorGivesPlainAverage) {
  const auto y = lg_data(5);
  const SwarmConfig cfg = small_config(12, 50);
  const auto estimates = run_swarm(lg_model(), box_over_a(), cfg, y);
  for (const auto& e : estimates) {
    double sum = 0.0;
    for (double v : e.per_filter[0]) sum += v;
    ASSERT_NEAR(e.value[0], sum / 12.0, 1e-12);
  }
}

TEST(Swarm, ImportanceWeightsFromWorkingPrior) {
  const auto y = lg_data(5);
  const SwarmConfig cfg = small_config(5, 50);
  auto theta_a = kLg.to_params();
  auto theta_b = kLg.to_params();
  theta_b[0] = 0.5;
  const PriorSpec prior = empirical_prior(
      {theta_a, theta_b}, [](ParamView theta) { return theta[0] > 0.7 ? std::log(1.5) : std::log(0.5); }, 1.5);
  auto [state, first] = instantiate_swarm(lg_model(), prior, cfg, ObsView(&y[0], 1));
  EXPECT_NE(std::find(state.log_rn.begin(), state.log_rn.end(), std::log(0.5)), state.log_rn.end());
  SwarmEstimate e = first;
  for (std::size_t t = 0; t < y.size(); ++t) {
    if (t > 0) e = advance_swarm(lg_model(), state, ObsView(&y[t], 1), cfg);
    double expected = 0.0;
    for (std::size_t i = 0; i < cfg.n_theta; ++i) expected += std::exp(state.log_rn[i]) * e.per_filter[0][i];
    ASSERT_NEAR(e.value[0], expected / static_cast<double>(cfg.n_theta), 1e-12);
  }
}

TEST(Swarm, RejectsProposalRatioAboveDeclaredBound) {
  const auto y = lg_data(1);
  const PriorSpec prior = empirical_prior({kLg.to_params()}, [](ParamView) { return std::log(3.0); }, 2.0);
  EXPECT_THROW(instantiate_swarm(lg_model(), prior, small_config(2, 10), ObsView(&y[0], 1)), ModelEvaluationError);
}

TEST(Swarm, IsPure) {
  const auto y = lg_data(15);
  const SwarmConfig cfg = small_config(8, 60, 99);
  const auto a = run_swarm(lg_model(), box_over_a(), cfg, y);
  const auto b = run_swarm(lg_model(), box_over_a(), cfg, y);
  for (std::size_t t = 0; t < y.size(); ++t) {
    ASSERT_EQ(a[t].value, b[t].value);
    ASSERT_EQ(*a[t].log_marginal_lik, *b[t].log_marginal_lik);
  }
}

TEST(Swarm, ReplicatesDiffer) {
  const auto y = lg_data(3);
  SwarmConfig cfg = small_config(4, 30);
  const auto a = run_swarm(lg_model(), box_over_a(), cfg, y);
  cfg.replicate = 1;
  const auto b = run_swarm(lg_model(), box_over_a(), cfg, y);
  EXPECT_NE(a.back().value[0], b.back().value[0]);
}

TEST(Swarm, WorkerCountDoesNotChangeResults) {
  const auto y = lg_data(12);
  const SwarmConfig cfg = small_config(16, 80, 5);
  const Executor four(4);
  const auto serial = run_swarm(lg_model(), box_over_a(), cfg, y);
  const auto parallel = run_swarm(lg_model(), box_over_a(), cfg, y, four);
  for (std::size_t t = 0; t < y.size(); ++t) {
    ASSERT_EQ(serial[t].value, parallel[t].value);
    ASSERT_EQ(serial[t].per_filter, parallel[t].per_filter);
    ASSERT_EQ(*serial[t].log_marginal_lik, *parallel[t].log_marginal_lik);
  }
}

TEST(Swarm, CheckEstimatorUsesResampledCloud) {
  const auto y = lg_data(4);
  SwarmConfig cfg = small_config(1, 200);
  cfg.estimator = Estimator::kCheck;
  const auto estimates = run_swarm(lg_model(), point_prior(kLg.to_params()), cfg, y);
  const FilterRun direct = run_filter(lg_model(), kLg.to_params(), 200, y, cfg.functionals, filter_stream(cfg, 0),
                                      FilterOptions{.compute_check = true});
  for (std::size_t t = 0; t < y.size(); ++t) ASSERT_EQ(estimates[t].value, direct.steps[t].phi_check);
}

TEST(MarginalLikelihood, LogMeanExp) {
  SwarmState state;
  state.params = {ParamVec{}, ParamVec{}};
  state.log_rn = {0.0, 0.0};
  state.cum_log_lik = {std::log(2.0), std::log(4.0)};
  state.alive = {true, true};
  state.t = 3;
  EXPECT_NEAR(swarm_marginal_likelihood(state), std::log(3.0), 1e-15);
}

TEST(MarginalLikelihood, UnbiasedForKnownParameter) {
  const auto y = lg_data(25);
  const double exact = kalman_run(kLg, y).back().filtered.log_lik;
  std::vector<double> ratios;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const SwarmConfig cfg = small_config(4, 200, 5000 + seed);
    const auto estimates = run_swarm(lg_model(), point_prior(kLg.to_params()), cfg, y);
    ratios.push_back(std::exp(*estimates.back().log_marginal_lik - exact));
  }
  EXPECT_LE(std::abs(testing::mean(ratios) - 1.0), 3.0 * testing::standard_error(ratios));
}

// A linear Gaussian model whose weight vanishes when theta[0] (a) is below a
// threshold and the observation exceeds 2.
ModelSpec fragile_model() {
  ModelSpec spec = lg_model();
  spec.log_unnorm_weight = [inner = spec.log_unnorm_weight](ParamView theta, std::optional<StateView> prev,
                                                            StateView x, ObsView y) {
    if (theta[0] < 0.7 && y[0] > 2.0) return kNegInf;
    return inner(theta, prev, x, y);
  };
  return spec;
}

TEST(DeadFilters, AbortCarriesFilterIndex) {
  const std::vector<double> y{0.1, 5.0, 0.2};
  auto theta_bad = kLg.to_params();
  theta_bad[0] = 0.5;
  const PriorSpec prior = empirical_prior({kLg.to_params(), theta_bad}, [](ParamView) { return 0.0; }, 1.0);
  SwarmConfig cfg = small_config(6, 20);
  auto [state, first] = instantiate_swarm(fragile_model(), prior, cfg, ObsView(&y[0], 1));
  std::size_t first_bad = state.n_theta();
  for (std::size_t i = 0; i < state.n_theta(); ++i) {
    if (state.params[i][0] < 0.7) first_bad = std::min(first_bad, i);
  }
  ASSERT_LT(first_bad, state.n_theta()) << "seed produced no fragile filter";
  try {
    advance_swarm(fragile_model(), state, ObsView(&y[1], 1), cfg);
    FAIL() << "expected AllWeightsZero";
  } catch (const AllWeightsZero& e) {
    EXPECT_EQ(e.time(), 2u);
    ASSERT_TRUE(e.filter().has_value());
    EXPECT_EQ(*e.filter(), first_bad);
  }
}

TEST(DeadFilters, DropExcludesFilterFromAverages) {
  const std::vector<double> y{0.1, 5.0, 0.2};
  auto theta_bad = kLg.to_params();
  theta_bad[0] = 0.5;
  const PriorSpec prior = empirical_prior({kLg.to_params(), theta_bad}, [](ParamView) { return 0.0; }, 1.0);
  SwarmConfig cfg = small_config(6, 20);
  cfg.dead_filter_policy = DeadFilterPolicy::kDrop;
  auto [state, first] = instantiate_swarm(fragile_model(), prior, cfg, ObsView(&y[0], 1));
  const auto second = advance_swarm(fragile_model(), state, ObsView(&y[1], 1), cfg);
  const auto third = advance_swarm(fragile_model(), state, ObsView(&y[2], 1), cfg);
  std::vector<double> live_values, live_log_rn;
  for (std::size_t i = 0; i < state.n_theta(); ++i) {
    if (state.params[i][0] < 0.7) {
      EXPECT_FALSE(state.alive[i]);
      EXPECT_TRUE(std::isnan(third.per_filter[0][i]));
      EXPECT_EQ(state.cum_log_lik[i], kNegInf);
    } else {
      live_values.push_back(third.per_filter[0][i]);
      live_log_rn.push_back(state.log_rn[i]);
    }
  }
  ASSERT_LT(state.n_alive(), state.n_theta());
  ASSERT_GT(state.n_alive(), 0u);
  EXPECT_EQ(third.value[0], combine(live_values, live_log_rn));
  EXPECT_TRUE(std::isfinite(*third.log_marginal_lik));
  EXPECT_TRUE(std::isfinite(second.value[0]));
}

TEST(ForecastInterval, TwoStandardDeviations) {
  const ForecastInterval interval = forecast_interval(1.0, 5.0);
  EXPECT_DOUBLE_EQ(interval.center, 1.0);
  EXPECT_DOUBLE_EQ(interval.halfwidth, 4.0);
  EXPECT_DOUBLE_EQ(interval.lower(), -3.0);
  EXPECT_DOUBLE_EQ(interval.upper(), 5.0);
}

TEST(ForecastInterval, ZeroVarianceAndNegativeVariance) {
  EXPECT_DOUBLE_EQ(forecast_interval(2.0, 4.0).halfwidth, 0.0);
  EXPECT_THROW(forecast_interval(2.0, 3.0), NegativeVarianceEstimate);
  const ForecastInterval clamped = forecast_interval(2.0, 3.0, true);
  EXPECT_DOUBLE_EQ(clamped.center, 2.0);
  EXPECT_DOUBLE_EQ(clamped.halfwidth, 0.0);
}

TEST(SwarmConfig, RejectsEmptySizes) {
  EXPECT_THROW(small_config(0, 10).validate(), std::invalid_argument);
  EXPECT_THROW(small_config(10, 0).validate(), std::invalid_argument);
}

}  // namespace
}  // namespace pswarm
