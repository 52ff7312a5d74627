#include "pswarm/models.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "pswarm/errors.hpp"

namespace pswarm {
namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;  // log(2 pi)
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_dim(ParamView theta, std::size_t dim, const char* model) {
  if (theta.size() != dim) {
    throw std::invalid_argument(std::string(model) + ": expected " + std::to_string(dim) + " parameters, got " +
                                std::to_string(theta.size()));
  }
}

}  // namespace

SvParams SvParams::from_params(ParamView theta) {
  require_dim(theta, 3, "sv");
  return {theta[0], theta[1], theta[2]};
}

void SvParams::validate() const {
  if (!(std::abs(phi) < 1.0)) throw std::invalid_argument("sv: |phi| must be < 1");
  if (!(beta >= 0.0)) throw std::invalid_argument("sv: beta must be >= 0");
  if (!(sigma > 0.0)) throw std::invalid_argument("sv: sigma must be > 0");
}

PriorSpec SvPrior::to_prior_spec() const {
  return uniform_box_prior({phi_support[0], beta_support[0], sigma_support[0]},
                           {phi_support[1], beta_support[1], sigma_support[1]});
}

ModelSpec sv_model() {
  GenerativeKernels kernels;
  kernels.sample_initial = [](ParamView theta, RngStream& rng, StateSpan out) {
    const double phi = theta[0], sigma = theta[2];
    out[0] = sigma / std::sqrt(1.0 - phi * phi) * rng.normal();
  };
  kernels.sample_transition = [](ParamView theta, StateView prev, RngStream& rng, StateSpan out) {
    out[0] = theta[0] * prev[0] + theta[2] * rng.normal();
  };
  kernels.sample_observation = [](ParamView theta, StateView x, RngStream& rng, ObsSpan out) {
    out[0] = theta[1] * std::exp(0.5 * x[0]) * rng.normal();
  };
  auto density = [](ParamView theta, StateView x, ObsView y) {
    const double beta = theta[1];
    const double variance = beta * beta * std::exp(x[0]);
    // Zero variance (beta = 0 or underflow) is a zero-weight particle.
    if (variance == 0.0) return kNegInf;
    return -0.5 * (kLogTwoPi + std::log(variance) + y[0] * y[0] / variance);
  };
  return make_bootstrap_model("sv", 1, 1, 3, std::move(kernels), std::move(density));
}

FilterFunctional sv_f1() {
  return {"f1", [](ParamView, StateView) { return 0.0; }};
}

FilterFunctional sv_f2() {
  return {"f2", [](ParamView theta, StateView x) {
            const double phi = theta[0], beta = theta[1], sigma = theta[2];
            const double value = beta * beta * std::exp(phi * x[0] + 0.5 * sigma * sigma);
            if (!std::isfinite(value)) {
              throw FunctionalOverflow("f2 overflows at x=" + std::to_string(x[0]));
            }
            return value;
          }};
}

LgParams LgParams::from_params(ParamView theta) {
  require_dim(theta, kLgParamDim, "lg");
  return {theta[0], theta[1], theta[2], theta[3], theta[4], theta[5]};
}

void LgParams::validate() const {
  if (!(q > 0.0)) throw std::invalid_argument("lg: q must be > 0");
  if (!(r > 0.0)) throw std::invalid_argument("lg: r must be > 0");
  if (!(p1 > 0.0)) throw std::invalid_argument("lg: p1 must be > 0");
}

ModelSpec lg_model() {
  GenerativeKernels kernels;
  kernels.sample_initial = [](ParamView theta, RngStream& rng, StateSpan out) {
    out[0] = theta[4] + std::sqrt(theta[5]) * rng.normal();
  };
  kernels.sample_transition = [](ParamView theta, StateView prev, RngStream& rng, StateSpan out) {
    out[0] = theta[0] * prev[0] + std::sqrt(theta[1]) * rng.normal();
  };
  kernels.sample_observation = [](ParamView theta, StateView x, RngStream& rng, ObsSpan out) {
    out[0] = theta[2] * x[0] + std::sqrt(theta[3]) * rng.normal();
  };
  auto density = [](ParamView theta, StateView x, ObsView y) {
    const double r = theta[3];
    const double residual = y[0] - theta[2] * x[0];
    return -0.5 * (kLogTwoPi + std::log(r) + residual * residual / r);
  };
  return make_bootstrap_model("lg", 1, 1, kLgParamDim, std::move(kernels), std::move(density));
}

FilterFunctional lg_f1() {
  return {"f1", [](ParamView theta, StateView x) { return theta[2] * theta[0] * x[0]; }};
}

FilterFunctional lg_f2() {
  return {"f2", [](ParamView theta, StateView x) {
            const double mean = theta[2] * theta[0] * x[0];
            return mean * mean + theta[2] * theta[2] * theta[1] + theta[3];
          }};
}

Simulation simulate(const ModelSpec& spec, ParamView theta, std::size_t length, const RngStream& rng) {
  if (length == 0) throw std::invalid_argument("simulate: length must be >= 1");
  Simulation sim;
  sim.states.dim = spec.state_dim;
  sim.states.values.resize(length * spec.state_dim);
  sim.observations.dim = spec.obs_dim;
  sim.observations.values.resize(length * spec.obs_dim);

  RngStream stream = rng.split(stream_purpose::kSimulation);
  spec.generative.sample_initial(theta, stream, sim.states[0]);
  spec.generative.sample_observation(theta, sim.states[0], stream, sim.observations[0]);
  for (std::size_t t = 1; t < length; ++t) {
    spec.generative.sample_transition(theta, sim.states[t - 1], stream, sim.states[t]);
    spec.generative.sample_observation(theta, sim.states[t], stream, sim.observations[t]);
  }
  return sim;
}

}  // namespace pswarm
