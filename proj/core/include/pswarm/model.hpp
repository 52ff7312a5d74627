#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pswarm/rng.hpp"

namespace pswarm {

using ParamVec = std::vector<double>;
using ParamView = std::span<const double>;
using StateView = std::span<const double>;
using StateSpan = std::span<double>;
using ObsView = std::span<const double>;
using ObsSpan = std::span<double>;

/// The generative model: mu_theta, F_theta and the observation law G_theta.
/// Used by `simulate` and by the bootstrap proposal.
struct GenerativeKernels {
  std::function<void(ParamView theta, RngStream& rng, StateSpan out)> sample_initial;
  std::function<void(ParamView theta, StateView prev, RngStream& rng, StateSpan out)> sample_transition;
  std::function<void(ParamView theta, StateView x, RngStream& rng, ObsSpan out)> sample_observation;
};

/// A state-space model together with the SISR proposal used to filter it.
///
/// `sample_initial` / `sample_transition` draw from the proposals Q_{theta,y1}
/// and Q_{theta,yt}(x_prev, .). `log_unnorm_weight` returns
/// log dT/dQ evaluated at the proposed state; `prev` is absent at t = 1.
/// All densities are in log space. Weights may be -inf, never +inf or NaN.
struct ModelSpec {
  std::string name;
  std::size_t state_dim = 1;
  std::size_t obs_dim = 1;
  std::size_t param_dim = 1;

  std::function<void(ParamView theta, ObsView y, RngStream& rng, StateSpan out)> sample_initial;
  std::function<void(ParamView theta, StateView prev, ObsView y, RngStream& rng, StateSpan out)>
      sample_transition;
  std::function<double(ParamView theta, StateView x, ObsView y)> log_obs_density;
  std::function<double(ParamView theta, std::optional<StateView> prev, StateView x, ObsView y)>
      log_unnorm_weight;

  GenerativeKernels generative;
  bool bootstrap = false;
};

/// Bootstrap configuration: Q = F, Q1 = mu, and the weight is the observation
/// density itself (same callable, evaluation for evaluation).
ModelSpec make_bootstrap_model(std::string name, std::size_t state_dim, std::size_t obs_dim,
                               std::size_t param_dim, GenerativeKernels generative,
                               std::function<double(ParamView, StateView, ObsView)> log_obs_density);

/// Parameter prior pi and proposal rho. Densities are with respect to Lebesgue
/// measure on the non-degenerate coordinates of the support box.
struct PriorSpec {
  std::function<double(ParamView theta)> log_pi_density;
  std::function<ParamVec(RngStream& rng)> sample_rho;
  /// log d(pi)/d(rho)(theta)
  std::function<double(ParamView theta)> log_rn_derivative;
  double rn_upper_bound = 1.0;
  std::size_t param_dim = 1;
};

/// Independent uniforms on [lower_k, upper_k] with rho = pi. A coordinate with
/// lower_k == upper_k is held fixed at that value.
PriorSpec uniform_box_prior(std::vector<double> lower, std::vector<double> upper);

/// Point mass at `theta` (rho = pi). Useful as a known-parameter swarm.
PriorSpec point_prior(ParamVec theta);

/// Working prior: rho is the empirical distribution of `draws` (for instance
/// an outdated posterior sample) and the caller supplies log d(pi)/d(rho).
PriorSpec empirical_prior(std::vector<ParamVec> draws, std::function<double(ParamView)> log_rn_derivative,
                          double rn_upper_bound);

/// A filtering expectation target f(x_t, theta).
struct FilterFunctional {
  std::string name;
  std::function<double(ParamView theta, StateView x)> eval;
};

FilterFunctional constant_functional(double value);

/// f(x, theta) = x[component]
FilterFunctional state_component(std::size_t component = 0);

/// f(x) * 1(|x_k| <= bound for every k).
FilterFunctional truncate(FilterFunctional f, double bound = 50.0);

}  // namespace pswarm
