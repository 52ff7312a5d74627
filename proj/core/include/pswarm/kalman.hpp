#pragma once

#include <span>
#include <vector>

#include "pswarm/models.hpp"

namespace pswarm {

/// Filtered moments of the scalar linear-Gaussian model after some prefix
/// y_{1:t}, plus the exact cumulative log-likelihood of that prefix.
struct KalmanState {
  double mean = 0.0;
  double var = 1.0;
  double log_lik = 0.0;
};

/// One time step of the exact filter with its intermediate quantities.
struct KalmanRecord {
  double predicted_mean = 0.0;  // E[x_t | y_{1:t-1}]
  double predicted_var = 0.0;
  double innovation = 0.0;      // y_t - c * predicted_mean
  double innovation_var = 0.0;  // c^2 predicted_var + r
  KalmanState filtered;

  /// E[y_{t+1} | y_{1:t}] and Var[y_{t+1} | y_{1:t}].
  double forecast_mean(const LgParams& p) const noexcept;
  double forecast_var(const LgParams& p) const noexcept;
};

/// Measurement update from predictive moments (mean, var).
KalmanRecord kalman_update(const LgParams& p, double predicted_mean, double predicted_var, double prior_log_lik,
                           double y);

/// Predict from the filtered state `s` through x_t = a x_{t-1} + noise, then update with y.
KalmanState kalman_step(const LgParams& p, const KalmanState& s, double y);

/// t = 1 update from the initial law N(m1, p1).
KalmanState kalman_first(const LgParams& p, double y);

/// Full forward pass; element t-1 describes time t.
std::vector<KalmanRecord> kalman_run(const LgParams& p, std::span<const double> observations);

}  // namespace pswarm
