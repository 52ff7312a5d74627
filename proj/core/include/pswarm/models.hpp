#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "pswarm/model.hpp"

namespace pswarm {

/// Parameters of the Taylor stochastic-volatility model
///   x_1 ~ N(0, sigma^2 / (1 - phi^2)),  x_t = phi x_{t-1} + sigma w_t,
///   y_t = beta exp(x_t / 2) v_t.
/// Parameter vector layout: (phi, beta, sigma).
struct SvParams {
  double phi = 0.91;
  double beta = 0.5;
  double sigma = 1.0;

  ParamVec to_params() const { return {phi, beta, sigma}; }
  static SvParams from_params(ParamView theta);
  /// Throws std::invalid_argument unless |phi| < 1, beta >= 0, sigma > 0.
  void validate() const;
};

/// Independent uniform supports for (phi, beta, sigma).
struct SvPrior {
  std::array<double, 2> phi_support{0.5, 0.99};
  std::array<double, 2> beta_support{0.0, 1.0};
  std::array<double, 2> sigma_support{0.5, 2.0};

  PriorSpec to_prior_spec() const;
};

ModelSpec sv_model();
/// E[y_{t+1} | x_t, theta] = 0
FilterFunctional sv_f1();
/// E[y_{t+1}^2 | x_t, theta] = beta^2 exp(phi x_t + sigma^2 / 2). Throws
/// FunctionalOverflow when the value is not representable; wrap with
/// truncate() to bound it instead.
FilterFunctional sv_f2();

/// Scalar linear-Gaussian model
///   x_1 ~ N(m1, p1),  x_t ~ N(a x_{t-1}, q),  y_t ~ N(c x_t, r).
/// Parameter vector layout: (a, q, c, r, m1, p1).
struct LgParams {
  double a = 0.9;
  double q = 1.0;
  double c = 1.0;
  double r = 1.0;
  double m1 = 0.0;
  double p1 = 1.0;

  ParamVec to_params() const { return {a, q, c, r, m1, p1}; }
  static LgParams from_params(ParamView theta);
  /// Throws std::invalid_argument unless q, r, p1 > 0.
  void validate() const;
};

inline constexpr std::size_t kLgParamDim = 6;

/// The linear-Gaussian model reads its parameters from theta, so a swarm can
/// vary any of them; LgParams::to_params() builds the vector.
ModelSpec lg_model();
/// E[y_{t+1} | x_t, theta] = c a x_t
FilterFunctional lg_f1();
/// E[y_{t+1}^2 | x_t, theta] = (c a x_t)^2 + c^2 q + r
FilterFunctional lg_f2();

/// Row-major (time, component) storage.
struct Series {
  std::size_t dim = 1;
  std::vector<double> values;

  std::size_t length() const noexcept { return dim == 0 ? 0 : values.size() / dim; }
  /// 0-based row.
  std::span<const double> operator[](std::size_t row) const { return {values.data() + row * dim, dim}; }
  std::span<double> operator[](std::size_t row) { return {values.data() + row * dim, dim}; }
};

struct Simulation {
  Series states;
  Series observations;
};

/// Forward simulation from the generative model (not the proposal).
Simulation simulate(const ModelSpec& spec, ParamView theta, std::size_t length, const RngStream& rng);

}  // namespace pswarm
