#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pswarm/executor.hpp"
#include "pswarm/model.hpp"
#include "pswarm/sisr.hpp"

namespace pswarm {

enum class Estimator { kHat, kCheck };

/// What to do when a filter's weights all vanish.
enum class DeadFilterPolicy {
  kAbort,  // rethrow AllWeightsZero with the filter index attached
  kDrop,   // exclude the filter from later averages and warn on stderr
};

struct SwarmConfig {
  std::size_t n_theta = 100;
  std::size_t n_particles = 100;
  std::uint64_t seed = 0;
  /// Distinguishes independent passes over the same data.
  std::uint64_t replicate = 0;
  std::vector<FilterFunctional> functionals;
  bool report_marginal_likelihood = false;
  Estimator estimator = Estimator::kHat;
  DeadFilterPolicy dead_filter_policy = DeadFilterPolicy::kAbort;
  Resampling resampling = Resampling::kMultinomial;

  void validate() const;
  RngStream root_stream() const { return RngStream(seed).split(replicate); }
};

/// Stream from which filter i draws its parameter.
RngStream parameter_stream(const SwarmConfig& cfg, std::size_t filter);
/// Stream driving filter i; step t uses `filter_stream(cfg, i).split(t)`.
RngStream filter_stream(const SwarmConfig& cfg, std::size_t filter);

struct SwarmState {
  std::vector<ParamVec> params;
  /// log d(pi)/d(rho)(theta^i)
  std::vector<double> log_rn;
  std::vector<ParticleFilter> filters;
  /// Per-filter running sum of log conditional likelihoods; -inf once dropped.
  std::vector<double> cum_log_lik;
  std::vector<bool> alive;
  std::size_t t = 0;

  std::size_t n_theta() const noexcept { return params.size(); }
  std::size_t n_alive() const noexcept;
  const ParticleCloud& cloud(std::size_t i) const { return filters[i].cloud(); }
};

struct SwarmEstimate {
  std::size_t t = 0;
  /// Swarm average, one entry per functional.
  std::vector<double> value;
  /// per_filter[k][i]: filter i's estimate of functional k (NaN when dropped).
  std::vector<std::vector<double>> per_filter;
  std::optional<double> log_marginal_lik;
};

/// Draws theta^i from rho, initializes every filter on y1 and combines.
std::pair<SwarmState, SwarmEstimate> instantiate_swarm(const ModelSpec& spec, const PriorSpec& prior,
                                                       const SwarmConfig& cfg, ObsView y1,
                                                       const Executor& executor = Executor::serial());

/// Advances every live filter by one observation, in place.
SwarmEstimate advance_swarm(const ModelSpec& spec, SwarmState& state, ObsView y, const SwarmConfig& cfg,
                            const Executor& executor = Executor::serial());

/// N^-1 sum_i exp(log_rn[i]) * per_filter[i], compensated summation.
double combine(std::span<const double> per_filter, std::span<const double> log_rn);

/// log( N^-1 sum_i exp(log_rn[i] + cum_log_lik[i]) ), N counting dropped
/// filters (a dead filter's likelihood estimate is zero).
double swarm_marginal_likelihood(const SwarmState& state);

struct ForecastInterval {
  double center = 0.0;
  double halfwidth = 0.0;

  double lower() const noexcept { return center - halfwidth; }
  double upper() const noexcept { return center + halfwidth; }
};

/// center = E[y], halfwidth = 2 sd from first and second moment estimates.
/// Throws NegativeVarianceEstimate when second < first^2 unless
/// `clamp_negative_variance` is set, in which case the halfwidth is 0.
ForecastInterval forecast_interval(double first_moment, double second_moment, bool clamp_negative_variance = false);

}  // namespace pswarm
