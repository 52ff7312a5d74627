#include "pswarm/sisr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "pswarm/errors.hpp"

namespace pswarm {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Fills `weights` with exp(log_weights - max) and returns max + log(sum).
// Throws on NaN / +inf and when every weight is zero.
double exponentiate_weights(std::span<const double> log_weights, std::span<double> weights, std::size_t t) {
  double max_log_weight = kNegInf;
  for (double lw : log_weights) {
    if (std::isnan(lw) || lw == std::numeric_limits<double>::infinity()) {
      throw ModelEvaluationError("log-weight is " + std::string(std::isnan(lw) ? "NaN" : "+inf") +
                                 " at t=" + std::to_string(t));
    }
    max_log_weight = std::max(max_log_weight, lw);
  }
  if (max_log_weight == kNegInf) throw AllWeightsZero(t);

  double sum = 0.0;
  for (std::size_t j = 0; j < log_weights.size(); ++j) {
    weights[j] = std::exp(log_weights[j] - max_log_weight);
    sum += weights[j];
  }
  return max_log_weight + std::log(sum);
}

// `weights` are linear and nonnegative with a positive total. On return they
// hold the running cumulative sum.
void draw_indices(std::span<double> weights, Resampling scheme, RngStream& rng, std::span<std::size_t> out) {
  const std::size_t n = weights.size();
  std::size_t last_positive = 0;
  double running = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (weights[j] > 0.0) last_positive = j;
    running += weights[j];
    weights[j] = running;
  }
  const double total = running;
  const auto begin = weights.begin();
  // First j with cumulative[j] > target never lands on a zero-weight particle.
  auto locate = [&](double target) {
    const auto it = std::upper_bound(begin, weights.end(), target);
    return it == weights.end() ? last_positive : static_cast<std::size_t>(it - begin);
  };

  const std::size_t n_out = out.size();
  if (scheme == Resampling::kMultinomial) {
    for (std::size_t k = 0; k < n_out; ++k) out[k] = locate(rng.uniform() * total);
  } else {
    const double spacing = total / static_cast<double>(n_out);
    const double offset = rng.uniform() * spacing;
    std::size_t j = 0;
    for (std::size_t k = 0; k < n_out; ++k) {
      const double target = offset + static_cast<double>(k) * spacing;
      while (j < n && weights[j] <= target) ++j;
      out[k] = j < n ? j : last_positive;
    }
  }
}

std::vector<std::size_t> resample(std::span<const double> log_weights, std::size_t n_out, RngStream& rng,
                                  Resampling scheme) {
  if (n_out == 0) throw std::invalid_argument("resample: n_out must be >= 1");
  std::vector<double> weights(log_weights.size());
  exponentiate_weights(log_weights, weights, 0);
  std::vector<std::size_t> indices(n_out);
  draw_indices(weights, scheme, rng, indices);
  return indices;
}

}  // namespace

ParticleCloud ParticleCloud::uniform(std::size_t state_dim, std::vector<double> particles, std::size_t t) {
  if (state_dim == 0 || particles.empty() || particles.size() % state_dim != 0) {
    throw std::invalid_argument("ParticleCloud::uniform: particle storage does not match state_dim");
  }
  ParticleCloud cloud;
  cloud.state_dim = state_dim;
  cloud.t = t;
  const std::size_t n = particles.size() / state_dim;
  cloud.particles = std::move(particles);
  cloud.log_weights.assign(n, 0.0);
  cloud.log_weight_sum = std::log(static_cast<double>(n));
  return cloud;
}

ParticleFilter::ParticleFilter(std::size_t n_particles, FilterOptions options)
    : n_particles_(n_particles), options_(options) {
  if (n_particles == 0) throw std::invalid_argument("ParticleFilter: n_particles must be >= 1");
}

void ParticleFilter::set_cloud(ParticleCloud cloud) {
  if (cloud.size() != n_particles_) throw std::invalid_argument("ParticleFilter::set_cloud: size mismatch");
  cloud_ = std::move(cloud);
}

void ParticleFilter::initialize(const ModelSpec& spec, ParamView theta, ObsView y1,
                                std::span<const FilterFunctional> functionals, const RngStream& rng,
                                FilterEstimates& out) {
  const std::size_t dim = spec.state_dim;
  proposed_.resize(n_particles_ * dim);
  proposed_log_weights_.resize(n_particles_);
  const RngStream mutation = rng.split(stream_purpose::kMutation);
  for (std::size_t j = 0; j < n_particles_; ++j) {
    RngStream stream = mutation.split(j);
    const StateSpan x(proposed_.data() + j * dim, dim);
    spec.sample_initial(theta, y1, stream, x);
    proposed_log_weights_[j] = spec.log_unnorm_weight(theta, std::nullopt, x, y1);
  }
  cloud_.state_dim = dim;
  weigh_estimate_resample(spec, theta, functionals, rng, 1, out);
}

void ParticleFilter::advance(const ModelSpec& spec, ParamView theta, ObsView y,
                             std::span<const FilterFunctional> functionals, const RngStream& rng,
                             FilterEstimates& out) {
  if (cloud_.size() != n_particles_) throw std::logic_error("ParticleFilter::advance before initialize");
  const std::size_t dim = spec.state_dim;
  proposed_.resize(n_particles_ * dim);
  proposed_log_weights_.resize(n_particles_);
  const RngStream mutation = rng.split(stream_purpose::kMutation);
  for (std::size_t j = 0; j < n_particles_; ++j) {
    RngStream stream = mutation.split(j);
    const StateView prev = cloud_.particle(j);
    const StateSpan x(proposed_.data() + j * dim, dim);
    spec.sample_transition(theta, prev, y, stream, x);
    proposed_log_weights_[j] = spec.log_unnorm_weight(theta, prev, x, y);
  }
  weigh_estimate_resample(spec, theta, functionals, rng, cloud_.t + 1, out);
}

void ParticleFilter::weigh_estimate_resample(const ModelSpec& spec, ParamView theta,
                                             std::span<const FilterFunctional> functionals, const RngStream& rng,
                                             std::size_t t, FilterEstimates& out) {
  const std::size_t n = n_particles_;
  const std::size_t dim = spec.state_dim;
  scratch_weights_.resize(n);
  const double log_weight_sum = exponentiate_weights(proposed_log_weights_, scratch_weights_, t);
  double weight_total = 0.0;
  for (double w : scratch_weights_) weight_total += w;

  out.t = t;
  out.log_cond_lik = log_weight_sum - std::log(static_cast<double>(n));
  out.phi_hat.assign(functionals.size(), 0.0);
  for (std::size_t k = 0; k < functionals.size(); ++k) {
    const auto& eval = functionals[k].eval;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double w = scratch_weights_[j];
      if (w == 0.0) continue;
      acc += w * eval(theta, StateView(proposed_.data() + j * dim, dim));
    }
    out.phi_hat[k] = acc / weight_total;
  }

  indices_.resize(n);
  RngStream resampling = rng.split(stream_purpose::kResampling);
  draw_indices(scratch_weights_, options_.resampling, resampling, indices_);

  cloud_.state_dim = dim;
  cloud_.t = t;
  cloud_.particles.resize(n * dim);
  for (std::size_t j = 0; j < n; ++j) {
    std::copy_n(proposed_.data() + indices_[j] * dim, dim, cloud_.particles.data() + j * dim);
  }
  cloud_.log_weights.assign(n, 0.0);
  cloud_.log_weight_sum = std::log(static_cast<double>(n));

  out.phi_check.clear();
  if (options_.compute_check) {
    out.phi_check.assign(functionals.size(), 0.0);
    for (std::size_t k = 0; k < functionals.size(); ++k) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += functionals[k].eval(theta, cloud_.particle(j));
      out.phi_check[k] = acc / static_cast<double>(n);
    }
  }
}

FilterStep init_filter(const ModelSpec& spec, ParamView theta, std::size_t n_particles, ObsView y1,
                       std::span<const FilterFunctional> functionals, const RngStream& rng,
                       const FilterOptions& options) {
  ParticleFilter filter(n_particles, options);
  FilterStep result;
  filter.initialize(spec, theta, y1, functionals, rng, result.estimates);
  result.cloud = filter.cloud();
  return result;
}

FilterStep step_filter(const ModelSpec& spec, ParamView theta, const ParticleCloud& cloud, ObsView y,
                       std::span<const FilterFunctional> functionals, const RngStream& rng,
                       const FilterOptions& options) {
  ParticleFilter filter(cloud.size(), options);
  filter.set_cloud(cloud);
  FilterStep result;
  filter.advance(spec, theta, y, functionals, rng, result.estimates);
  result.cloud = filter.cloud();
  return result;
}

std::vector<std::size_t> resample_multinomial(std::span<const double> log_weights, std::size_t n_out,
                                              RngStream& rng) {
  return resample(log_weights, n_out, rng, Resampling::kMultinomial);
}

std::vector<std::size_t> resample_systematic(std::span<const double> log_weights, std::size_t n_out,
                                             RngStream& rng) {
  return resample(log_weights, n_out, rng, Resampling::kSystematic);
}

FilterRun run_filter(const ModelSpec& spec, ParamView theta, std::size_t n_particles,
                     std::span<const double> observations, std::span<const FilterFunctional> functionals,
                     const RngStream& rng, const FilterOptions& options) {
  const std::size_t obs_dim = spec.obs_dim;
  if (observations.empty() || observations.size() % obs_dim != 0) {
    throw std::invalid_argument("run_filter: observations must be a non-empty multiple of obs_dim");
  }
  const std::size_t length = observations.size() / obs_dim;
  ParticleFilter filter(n_particles, options);
  FilterRun run;
  run.steps.resize(length);
  for (std::size_t row = 0; row < length; ++row) {
    const ObsView y = observations.subspan(row * obs_dim, obs_dim);
    const RngStream step_stream = rng.split(row + 1);
    if (row == 0) {
      filter.initialize(spec, theta, y, functionals, step_stream, run.steps[row]);
    } else {
      filter.advance(spec, theta, y, functionals, step_stream, run.steps[row]);
    }
    run.log_likelihood += run.steps[row].log_cond_lik;
  }
  return run;
}

}  // namespace pswarm
