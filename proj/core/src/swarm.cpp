#include "pswarm/swarm.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

#include "pswarm/errors.hpp"
#include "pswarm/numeric.hpp"

namespace pswarm {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

FilterOptions filter_options(const SwarmConfig& cfg) {
  return {cfg.resampling, cfg.estimator == Estimator::kCheck};
}

// Runs `step(i, estimates_i)` for every live filter and applies the dead-filter
// policy. Per-filter estimates land in `scratch[i]`.
template <typename Step>
void run_filters(SwarmState& state, const SwarmConfig& cfg, const Executor& executor,
                 std::vector<FilterEstimates>& scratch, Step&& step) {
  const std::size_t n = state.n_theta();
  std::vector<char> died(n, 0);
  executor.for_each_index(n, [&](std::size_t i) {
    if (!state.alive[i]) return;
    try {
      step(i, scratch[i]);
    } catch (const AllWeightsZero& e) {
      if (cfg.dead_filter_policy == DeadFilterPolicy::kAbort) throw e.with_filter(i);
      died[i] = 1;
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    if (died[i]) {
      state.alive[i] = false;
      state.cum_log_lik[i] = kNegInf;
      std::cerr << "warning: dropping filter " << i << " (all weights zero at t=" << state.t + 1 << ")\n";
    } else if (state.alive[i]) {
      state.cum_log_lik[i] += scratch[i].log_cond_lik;
    }
  }
}

SwarmEstimate assemble(const SwarmState& state, const SwarmConfig& cfg, const std::vector<FilterEstimates>& scratch) {
  const std::size_t n = state.n_theta();
  const std::size_t k_count = cfg.functionals.size();
  SwarmEstimate estimate;
  estimate.t = state.t;
  estimate.value.assign(k_count, kNaN);
  estimate.per_filter.assign(k_count, std::vector<double>(n, kNaN));

  std::vector<double> live_log_rn;
  live_log_rn.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (state.alive[i]) live_log_rn.push_back(state.log_rn[i]);
  }
  std::vector<double> live_values;
  live_values.reserve(n);
  for (std::size_t k = 0; k < k_count; ++k) {
    live_values.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (!state.alive[i]) continue;
      const auto& source = cfg.estimator == Estimator::kCheck ? scratch[i].phi_check : scratch[i].phi_hat;
      estimate.per_filter[k][i] = source[k];
      live_values.push_back(source[k]);
    }
    if (!live_values.empty()) estimate.value[k] = combine(live_values, live_log_rn);
  }
  if (cfg.report_marginal_likelihood) estimate.log_marginal_lik = swarm_marginal_likelihood(state);
  return estimate;
}

}  // namespace

void SwarmConfig::validate() const {
  if (n_theta == 0) throw std::invalid_argument("SwarmConfig: n_theta must be >= 1");
  if (n_particles == 0) throw std::invalid_argument("SwarmConfig: n_particles must be >= 1");
}

RngStream parameter_stream(const SwarmConfig& cfg, std::size_t filter) {
  return cfg.root_stream().split(stream_purpose::kParameters).split(filter);
}

RngStream filter_stream(const SwarmConfig& cfg, std::size_t filter) {
  return cfg.root_stream().split(stream_purpose::kFilters).split(filter);
}

std::size_t SwarmState::n_alive() const noexcept {
  std::size_t count = 0;
  for (bool a : alive) count += a ? 1 : 0;
  return count;
}

std::pair<SwarmState, SwarmEstimate> instantiate_swarm(const ModelSpec& spec, const PriorSpec& prior,
                                                       const SwarmConfig& cfg, ObsView y1,
                                                       const Executor& executor) {
  cfg.validate();
  const std::size_t n = cfg.n_theta;
  SwarmState state;
  state.params.resize(n);
  state.log_rn.resize(n);
  state.cum_log_lik.assign(n, 0.0);
  state.alive.assign(n, true);
  state.filters.reserve(n);
  for (std::size_t i = 0; i < n; ++i) state.filters.emplace_back(cfg.n_particles, filter_options(cfg));

  const double log_bound = std::log(prior.rn_upper_bound);
  for (std::size_t i = 0; i < n; ++i) {
    RngStream stream = parameter_stream(cfg, i);
    state.params[i] = prior.sample_rho(stream);
    if (state.params[i].size() != spec.param_dim) {
      throw std::invalid_argument("instantiate_swarm: prior draws " + std::to_string(state.params[i].size()) +
                                  " parameters, model expects " + std::to_string(spec.param_dim));
    }
    state.log_rn[i] = prior.log_rn_derivative(state.params[i]);
    if (!(state.log_rn[i] <= log_bound)) {
      throw ModelEvaluationError("d(pi)/d(rho) at filter " + std::to_string(i) + " exceeds its declared bound");
    }
  }

  std::vector<FilterEstimates> scratch(n);
  run_filters(state, cfg, executor, scratch, [&](std::size_t i, FilterEstimates& out) {
    state.filters[i].initialize(spec, state.params[i], y1, cfg.functionals, filter_stream(cfg, i).split(1), out);
  });
  state.t = 1;
  SwarmEstimate estimate = assemble(state, cfg, scratch);
  return {std::move(state), std::move(estimate)};
}

SwarmEstimate advance_swarm(const ModelSpec& spec, SwarmState& state, ObsView y, const SwarmConfig& cfg,
                            const Executor& executor) {
  if (state.t == 0) throw std::logic_error("advance_swarm: swarm has not been instantiated");
  const std::size_t t = state.t + 1;
  std::vector<FilterEstimates> scratch(state.n_theta());
  run_filters(state, cfg, executor, scratch, [&](std::size_t i, FilterEstimates& out) {
    state.filters[i].advance(spec, state.params[i], y, cfg.functionals, filter_stream(cfg, i).split(t), out);
  });
  state.t = t;
  return assemble(state, cfg, scratch);
}

double combine(std::span<const double> per_filter, std::span<const double> log_rn) {
  if (per_filter.size() != log_rn.size() || per_filter.empty()) {
    throw std::invalid_argument("combine: arrays must be non-empty and of equal length");
  }
  CompensatedSum sum;
  for (std::size_t i = 0; i < per_filter.size(); ++i) {
    sum.add(std::exp(log_rn[i]) * per_filter[i]);
  }
  return sum.value() / static_cast<double>(per_filter.size());
}

double swarm_marginal_likelihood(const SwarmState& state) {
  if (state.t == 0) throw std::logic_error("swarm_marginal_likelihood: swarm has not been instantiated");
  std::vector<double> terms(state.n_theta());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = state.log_rn[i] + state.cum_log_lik[i];
  return log_sum_exp(terms) - std::log(static_cast<double>(terms.size()));
}

ForecastInterval forecast_interval(double first_moment, double second_moment, bool clamp_negative_variance) {
  const double variance = second_moment - first_moment * first_moment;
  if (variance < 0.0) {
    if (!clamp_negative_variance) throw NegativeVarianceEstimate(first_moment, second_moment);
    return {first_moment, 0.0};
  }
  return {first_moment, 2.0 * std::sqrt(variance)};
}

}  // namespace pswarm
