#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "experiments/config.hpp"
#include "experiments/csv.hpp"
#include "pswarm/executor.hpp"
#include "pswarm/models.hpp"

namespace pswarm::experiments {

/// Simulates cfg.length steps at cfg.model_params with cfg.seed.
Simulation simulate_from_config(const ExperimentConfig& cfg);

/// Writes "t,y" (or "t,y,x" with states) and returns the simulation.
Simulation cmd_simulate(const ExperimentConfig& cfg, const std::filesystem::path& out, bool with_states);

struct ForecastRow {
  std::size_t t = 0;
  double y = 0.0;
  double f1_hat = 0.0;
  double f2_hat = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::optional<double> log_marginal_lik;
};

/// Swarm over y_{1:T}; row t forecasts y_{t+1} from y_{1:t}.
std::vector<ForecastRow> run_forecast(const ExperimentConfig& cfg, std::span<const double> observations,
                                      const Executor& executor = Executor::serial());
CsvTable forecast_table(const std::vector<ForecastRow>& rows);
void cmd_forecast(const ExperimentConfig& cfg, const std::filesystem::path& data,
                  const std::filesystem::path& out, const Executor& executor = Executor::serial());

struct ReplicationStudy {
  /// f2[r][t-1]: replicate r's swarm estimate of E[y_{t+1}^2 | y_{1:t}].
  std::vector<std::vector<double>> f2;
  std::vector<double> mean;
  /// Per-t sample standard deviation across replicates.
  std::vector<double> stddev;
};

ReplicationStudy run_replication_study(const ExperimentConfig& cfg, std::span<const double> observations,
                                       const Executor& executor = Executor::serial());
/// Columns "t,mean,std"; with drop_first the t = 1 row is omitted.
CsvTable replication_table(const ReplicationStudy& study, bool drop_first);
/// Uses `data` when given, otherwise simulates from the config.
void cmd_replication_study(const ExperimentConfig& cfg, const std::optional<std::filesystem::path>& data,
                           const std::filesystem::path& out, bool drop_first,
                           const Executor& executor = Executor::serial());

struct ConvergenceRow {
  std::string ladder;  // "n_x" or "n_theta"
  std::size_t n_x = 0;
  std::size_t n_theta = 0;
  /// RMSE against the exact filter (n_x ladder) or replication std (n_theta ladder),
  /// pooled over time.
  double metric = 0.0;
  /// metric of the previous rung / metric of this rung.
  std::optional<double> ratio;
  std::optional<double> theoretical_ratio;
};

/// Linear-Gaussian only. The n_x ladder runs single filters at the model
/// parameters; the n_theta ladder runs swarms over the configured prior with
/// cfg.ladder_particles particles per filter.
std::vector<ConvergenceRow> run_convergence_study(const ExperimentConfig& cfg, std::span<const double> observations,
                                                  const Executor& executor = Executor::serial());
std::vector<ConvergenceRow> run_nx_ladder(const ExperimentConfig& cfg, std::span<const double> observations);
std::vector<ConvergenceRow> run_ntheta_ladder(const ExperimentConfig& cfg, std::span<const double> observations,
                                              const Executor& executor = Executor::serial());
CsvTable convergence_table(const std::vector<ConvergenceRow>& rows);
void cmd_convergence_study(const ExperimentConfig& cfg, const std::optional<std::filesystem::path>& data,
                           const std::filesystem::path& out, const Executor& executor = Executor::serial());

/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_stddev(std::span<const double> values);

}  // namespace pswarm::experiments
