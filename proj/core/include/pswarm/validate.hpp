#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pswarm/model.hpp"

namespace pswarm {

struct ProbeRecord {
  ParamVec theta;
  double log_rn = 0.0;
  double log_weight_initial = 0.0;
  double log_weight_transition = 0.0;
  double log_obs_density = 0.0;
};

struct Violation {
  std::size_t probe;
  std::string what;
};

/// Diagnostic sweep over (theta, x, y) triples drawn through the model's own
/// samplers. Finding no violations does not prove the filtering assumptions;
/// it only rules out the failures a probe can see (+inf weights, NaN
/// densities, d(pi)/d(rho) above its declared bound).
struct ValidationReport {
  std::vector<ProbeRecord> probes;
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
};

/// Throws ModelEvaluationError if a sampler throws or returns non-finite state.
ValidationReport validate_model(const ModelSpec& spec, const PriorSpec& prior, std::size_t probe_count,
                                const RngStream& rng);

}  // namespace pswarm
