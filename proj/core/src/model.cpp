#include "pswarm/model.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <utility>

#include "pswarm/errors.hpp"

namespace pswarm {

ModelSpec make_bootstrap_model(std::string name, std::size_t state_dim, std::size_t obs_dim,
                               std::size_t param_dim, GenerativeKernels generative,
                               std::function<double(ParamView, StateView, ObsView)> log_obs_density) {
  if (!generative.sample_initial || !generative.sample_transition || !generative.sample_observation ||
      !log_obs_density) {
    throw std::invalid_argument("make_bootstrap_model: every kernel must be set");
  }
  ModelSpec spec;
  spec.name = std::move(name);
  spec.state_dim = state_dim;
  spec.obs_dim = obs_dim;
  spec.param_dim = param_dim;
  spec.bootstrap = true;

  spec.sample_initial = [init = generative.sample_initial](ParamView theta, ObsView, RngStream& rng,
                                                           StateSpan out) { init(theta, rng, out); };
  spec.sample_transition = [step = generative.sample_transition](ParamView theta, StateView prev, ObsView,
                                                                 RngStream& rng, StateSpan out) {
    step(theta, prev, rng, out);
  };
  spec.log_obs_density = std::move(log_obs_density);
  // Shares the density callable, so the bootstrap weight is the density bit for bit.
  spec.log_unnorm_weight = [density = spec.log_obs_density](ParamView theta, std::optional<StateView>,
                                                           StateView x, ObsView y) {
    return density(theta, x, y);
  };
  spec.generative = std::move(generative);
  return spec;
}

PriorSpec uniform_box_prior(std::vector<double> lower, std::vector<double> upper) {
  if (lower.size() != upper.size() || lower.empty()) {
    throw std::invalid_argument("uniform_box_prior: bounds must be non-empty and of equal length");
  }
  double log_volume = 0.0;
  for (std::size_t k = 0; k < lower.size(); ++k) {
    if (!(std::isfinite(lower[k]) && std::isfinite(upper[k]) && lower[k] <= upper[k])) {
      throw std::invalid_argument("uniform_box_prior: invalid bounds for coordinate " + std::to_string(k));
    }
    if (upper[k] > lower[k]) log_volume += std::log(upper[k] - lower[k]);
  }

  PriorSpec prior;
  prior.param_dim = lower.size();
  prior.rn_upper_bound = 1.0;
  prior.log_pi_density = [lower, upper, log_volume](ParamView theta) {
    for (std::size_t k = 0; k < lower.size(); ++k) {
      if (lower[k] == upper[k] ? theta[k] != lower[k] : (theta[k] < lower[k] || theta[k] > upper[k])) {
        return -std::numeric_limits<double>::infinity();
      }
    }
    return -log_volume;
  };
  prior.sample_rho = [lower = std::move(lower), upper = std::move(upper)](RngStream& rng) {
    ParamVec theta(lower.size());
    for (std::size_t k = 0; k < lower.size(); ++k) {
      theta[k] = lower[k] == upper[k] ? lower[k] : lower[k] + (upper[k] - lower[k]) * rng.uniform();
    }
    return theta;
  };
  prior.log_rn_derivative = [](ParamView) { return 0.0; };
  return prior;
}

PriorSpec point_prior(ParamVec theta) {
  return uniform_box_prior(theta, theta);
}

PriorSpec empirical_prior(std::vector<ParamVec> draws, std::function<double(ParamView)> log_rn_derivative,
                          double rn_upper_bound) {
  if (draws.empty()) throw std::invalid_argument("empirical_prior: no draws");
  if (!(rn_upper_bound > 0.0)) throw std::invalid_argument("empirical_prior: rn_upper_bound must be positive");
  PriorSpec prior;
  prior.param_dim = draws.front().size();
  prior.rn_upper_bound = rn_upper_bound;
  // A working prior has no closed-form density; only d(pi)/d(rho) is used.
  prior.log_rn_derivative = std::move(log_rn_derivative);
  auto shared = std::make_shared<const std::vector<ParamVec>>(std::move(draws));
  prior.sample_rho = [shared](RngStream& rng) {
    const auto n = shared->size();
    auto index = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
    if (index >= n) index = n - 1;
    return (*shared)[index];
  };
  return prior;
}

FilterFunctional constant_functional(double value) {
  return {"const", [value](ParamView, StateView) { return value; }};
}

FilterFunctional state_component(std::size_t component) {
  return {"x" + std::to_string(component), [component](ParamView, StateView x) { return x[component]; }};
}

FilterFunctional truncate(FilterFunctional f, double bound) {
  FilterFunctional out;
  out.name = f.name + "_trunc";
  out.eval = [inner = std::move(f.eval), bound](ParamView theta, StateView x) {
    for (double xk : x) {
      if (!(std::abs(xk) <= bound)) return 0.0;
    }
    return inner(theta, x);
  };
  return out;
}

}  // namespace pswarm
