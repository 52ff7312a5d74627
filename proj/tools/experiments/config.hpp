#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pswarm/model.hpp"
#include "pswarm/swarm.hpp"

namespace pswarm::experiments {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error("config error [" + key + "]: " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat "key = value" document with [section] headers and '#' comments.
/// Keys outside any section live in section "".
class IniDocument {
 public:
  static IniDocument parse(const std::string& text);
  static IniDocument load(const std::filesystem::path& path);

  bool has(const std::string& section, const std::string& key) const;
  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  const std::map<std::string, std::string>& section(const std::string& name) const;
  std::vector<std::string> sections() const;

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

enum class ModelKind { kSv, kLg };

enum class Output { kForecastIntervals, kF2ReplicationStd, kConvergenceTable, kMarginalLik };

struct ExperimentConfig {
  ModelKind model = ModelKind::kSv;
  /// Model parameter vector in the model's own layout.
  ParamVec model_params;
  /// Support box per parameter; equal bounds fix a coordinate.
  std::vector<double> prior_lower;
  std::vector<double> prior_upper;

  std::size_t n_theta = 100;
  std::size_t n_particles = 100;
  std::uint64_t seed = 1;
  std::size_t length = 1000;
  std::size_t replications = 1;
  std::vector<Output> outputs;

  Estimator estimator = Estimator::kHat;
  DeadFilterPolicy dead_filter_policy = DeadFilterPolicy::kAbort;
  Resampling resampling = Resampling::kMultinomial;
  bool clamp_variance = false;
  /// When set, f2 is replaced by f2 * 1(|x| <= bound).
  std::optional<double> truncate_bound;

  std::vector<std::size_t> nx_ladder{250, 1000, 4000};
  std::vector<std::size_t> ntheta_ladder{100, 400, 1600};
  std::size_t ladder_particles = 100;

  std::size_t workers = 1;

  static ExperimentConfig from_document(const IniDocument& doc);
  static ExperimentConfig load(const std::filesystem::path& path);

  ModelSpec model_spec() const;
  PriorSpec prior_spec() const;
  /// (E[y_{t+1} | x_t, theta], E[y_{t+1}^2 | x_t, theta]) for the chosen model.
  std::vector<FilterFunctional> forecast_functionals() const;
  SwarmConfig swarm_config(std::vector<FilterFunctional> functionals, std::uint64_t replicate = 0) const;
  bool wants(Output output) const;
};

/// Parameter names in vector order.
const std::vector<std::string>& parameter_names(ModelKind kind);

}  // namespace pswarm::experiments
