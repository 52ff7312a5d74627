#include "pswarm/kalman.hpp"

#include <cmath>
#include <stdexcept>

namespace pswarm {
namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;

}  // namespace

double KalmanRecord::forecast_mean(const LgParams& p) const noexcept { return p.c * p.a * filtered.mean; }

double KalmanRecord::forecast_var(const LgParams& p) const noexcept {
  return p.c * p.c * (p.a * p.a * filtered.var + p.q) + p.r;
}

KalmanRecord kalman_update(const LgParams& p, double predicted_mean, double predicted_var, double prior_log_lik,
                           double y) {
  KalmanRecord record;
  record.predicted_mean = predicted_mean;
  record.predicted_var = predicted_var;
  record.innovation = y - p.c * predicted_mean;
  record.innovation_var = p.c * p.c * predicted_var + p.r;
  const double gain = predicted_var * p.c / record.innovation_var;
  record.filtered.mean = predicted_mean + gain * record.innovation;
  // (1 - K c) P rewritten as P r / S, positive whenever r > 0.
  record.filtered.var = predicted_var * p.r / record.innovation_var;
  record.filtered.log_lik =
      prior_log_lik - 0.5 * (kLogTwoPi + std::log(record.innovation_var) +
                             record.innovation * record.innovation / record.innovation_var);
  return record;
}

KalmanState kalman_step(const LgParams& p, const KalmanState& s, double y) {
  return kalman_update(p, p.a * s.mean, p.a * p.a * s.var + p.q, s.log_lik, y).filtered;
}

KalmanState kalman_first(const LgParams& p, double y) { return kalman_update(p, p.m1, p.p1, 0.0, y).filtered; }

std::vector<KalmanRecord> kalman_run(const LgParams& p, std::span<const double> observations) {
  if (observations.empty()) throw std::invalid_argument("kalman_run: observations must be non-empty");
  p.validate();
  std::vector<KalmanRecord> records;
  records.reserve(observations.size());
  records.push_back(kalman_update(p, p.m1, p.p1, 0.0, observations[0]));
  for (std::size_t t = 1; t < observations.size(); ++t) {
    const KalmanState& prev = records.back().filtered;
    records.push_back(kalman_update(p, p.a * prev.mean, p.a * p.a * prev.var + p.q, prev.log_lik, observations[t]));
  }
  return records;
}

}  // namespace pswarm
