#include "pswarm/validate.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <stdexcept>

#include "pswarm/errors.hpp"

namespace pswarm {
namespace {

template <typename Fn>
void guarded(std::size_t probe, const char* what, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    throw ModelEvaluationError("probe " + std::to_string(probe) + ": " + what + " failed: " + e.what());
  }
}

void require_finite(std::size_t probe, const char* what, std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw ModelEvaluationError("probe " + std::to_string(probe) + ": " + what + " produced a non-finite value");
    }
  }
}

}  // namespace

ValidationReport validate_model(const ModelSpec& spec, const PriorSpec& prior, std::size_t probe_count,
                                const RngStream& rng) {
  if (probe_count == 0) throw std::invalid_argument("validate_model: probe_count must be >= 1");

  ValidationReport report;
  report.probes.reserve(probe_count);
  const double log_bound = std::log(prior.rn_upper_bound);
  const RngStream root = rng.split(stream_purpose::kProbes);

  std::vector<double> x1(spec.state_dim), x2(spec.state_dim);
  std::vector<double> proposal1(spec.state_dim), proposal2(spec.state_dim);
  std::vector<double> y1(spec.obs_dim), y2(spec.obs_dim);

  auto flag = [&](std::size_t probe, const std::string& what) { report.violations.push_back({probe, what}); };
  auto check_weight = [&](std::size_t probe, const char* label, double w) {
    if (std::isnan(w)) flag(probe, std::string(label) + " is NaN");
    if (w == std::numeric_limits<double>::infinity()) flag(probe, std::string(label) + " is +inf");
  };

  for (std::size_t probe = 0; probe < probe_count; ++probe) {
    RngStream stream = root.split(probe);
    ProbeRecord record;

    guarded(probe, "sample_rho", [&] { record.theta = prior.sample_rho(stream); });
    require_finite(probe, "sample_rho", record.theta);
    const ParamView theta = record.theta;

    // Latent path and data from the generative model, proposals from Q.
    guarded(probe, "generative kernels", [&] {
      spec.generative.sample_initial(theta, stream, x1);
      spec.generative.sample_observation(theta, x1, stream, y1);
      spec.generative.sample_transition(theta, x1, stream, x2);
      spec.generative.sample_observation(theta, x2, stream, y2);
    });
    guarded(probe, "proposal kernels", [&] {
      spec.sample_initial(theta, y1, stream, proposal1);
      spec.sample_transition(theta, proposal1, y2, stream, proposal2);
    });
    require_finite(probe, "proposal kernels", proposal1);
    require_finite(probe, "proposal kernels", proposal2);

    record.log_weight_initial = spec.log_unnorm_weight(theta, std::nullopt, proposal1, y1);
    record.log_weight_transition =
        spec.log_unnorm_weight(theta, std::optional<StateView>(proposal1), proposal2, y2);
    record.log_obs_density = spec.log_obs_density(theta, proposal2, y2);
    record.log_rn = prior.log_rn_derivative(theta);

    check_weight(probe, "initial log-weight", record.log_weight_initial);
    check_weight(probe, "transition log-weight", record.log_weight_transition);
    if (std::isnan(record.log_obs_density)) flag(probe, "log observation density is NaN");
    if (std::isnan(record.log_rn)) {
      flag(probe, "log d(pi)/d(rho) is NaN");
    } else if (record.log_rn > log_bound) {
      flag(probe, "d(pi)/d(rho) exceeds its declared upper bound");
    }
    report.probes.push_back(std::move(record));
  }
  return report;
}

}  // namespace pswarm
