#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pswarm/model.hpp"
#include "pswarm/rng.hpp"

namespace pswarm {

enum class Resampling {
  kMultinomial,  // iid categorical draws
  kSystematic,   // single-offset stratified grid; lower variance, off by default
};

struct FilterOptions {
  Resampling resampling = Resampling::kMultinomial;
  /// Also compute the post-resampling estimator phi_check.
  bool compute_check = false;
};

/// N particles of one filter at time t. Flat row-major storage:
/// particle j occupies [j * state_dim, (j + 1) * state_dim).
struct ParticleCloud {
  std::size_t state_dim = 1;
  std::size_t t = 0;
  std::vector<double> particles;
  /// Unnormalized; -inf marks a zero-weight particle.
  std::vector<double> log_weights;
  /// log-sum-exp of log_weights.
  double log_weight_sum = 0.0;

  std::size_t size() const noexcept { return log_weights.size(); }
  std::span<const double> particle(std::size_t j) const { return {particles.data() + j * state_dim, state_dim}; }

  /// Uniformly weighted cloud (log-weights 0) over the given particles.
  static ParticleCloud uniform(std::size_t state_dim, std::vector<double> particles, std::size_t t);
};

struct FilterEstimates {
  std::size_t t = 0;
  /// Weighted average over the mutated particles, one entry per functional.
  std::vector<double> phi_hat;
  /// Plain average over the resampled particles; empty unless requested.
  std::vector<double> phi_check;
  /// log( N^-1 sum_j W_t^j ), estimate of log L(y_{1:t}) / L(y_{1:t-1}).
  double log_cond_lik = 0.0;
};

/// Mutable state of one SISR filter for a fixed parameter. Owns its cloud and
/// scratch buffers so repeated steps do not allocate.
///
/// Stream layout per step: particle j mutates with
/// `rng.split(kMutation).split(j)`; resampling draws from `rng.split(kResampling)`.
/// `rng` is the stream for the current time step.
class ParticleFilter {
 public:
  explicit ParticleFilter(std::size_t n_particles, FilterOptions options = {});

  /// t = 1: draw from Q_{theta,y1}, weight, estimate, resample.
  void initialize(const ModelSpec& spec, ParamView theta, ObsView y1, std::span<const FilterFunctional> functionals,
                  const RngStream& rng, FilterEstimates& out);

  /// t >= 2: mutate the current (uniformly weighted) cloud with Q, weight,
  /// estimate, resample.
  void advance(const ModelSpec& spec, ParamView theta, ObsView y, std::span<const FilterFunctional> functionals,
               const RngStream& rng, FilterEstimates& out);

  const ParticleCloud& cloud() const noexcept { return cloud_; }
  /// Replace the cloud; it must be post-resampling.
  void set_cloud(ParticleCloud cloud);

  std::size_t size() const noexcept { return n_particles_; }
  const FilterOptions& options() const noexcept { return options_; }

 private:
  void weigh_estimate_resample(const ModelSpec& spec, ParamView theta, std::span<const FilterFunctional> functionals,
                               const RngStream& rng, std::size_t t, FilterEstimates& out);

  std::size_t n_particles_;
  FilterOptions options_;
  ParticleCloud cloud_;
  std::vector<double> proposed_;
  std::vector<double> proposed_log_weights_;
  std::vector<double> scratch_weights_;
  std::vector<std::size_t> indices_;
};

struct FilterStep {
  ParticleCloud cloud;
  FilterEstimates estimates;
};

FilterStep init_filter(const ModelSpec& spec, ParamView theta, std::size_t n_particles, ObsView y1,
                       std::span<const FilterFunctional> functionals, const RngStream& rng,
                       const FilterOptions& options = {});

FilterStep step_filter(const ModelSpec& spec, ParamView theta, const ParticleCloud& cloud, ObsView y,
                       std::span<const FilterFunctional> functionals, const RngStream& rng,
                       const FilterOptions& options = {});

/// Draws `n_out` indices with P(I = j) proportional to exp(log_weights[j]).
/// Throws AllWeightsZero if no weight is positive.
std::vector<std::size_t> resample_multinomial(std::span<const double> log_weights, std::size_t n_out,
                                              RngStream& rng);
std::vector<std::size_t> resample_systematic(std::span<const double> log_weights, std::size_t n_out,
                                             RngStream& rng);

struct FilterRun {
  std::vector<FilterEstimates> steps;
  /// Sum of the per-step log conditional likelihoods.
  double log_likelihood = 0.0;
};

/// Runs a filter over observations rows 0..T-1 (times 1..T). The time-t step
/// uses `rng.split(t)`.
FilterRun run_filter(const ModelSpec& spec, ParamView theta, std::size_t n_particles,
                     std::span<const double> observations, std::span<const FilterFunctional> functionals,
                     const RngStream& rng, const FilterOptions& options = {});

}  // namespace pswarm
