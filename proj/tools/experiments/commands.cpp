#include "experiments/commands.hpp"

#include <cmath>
#include <limits>

#include "pswarm/kalman.hpp"
#include "pswarm/swarm.hpp"

namespace pswarm::experiments {
namespace {

constexpr std::uint64_t kNxLadderStream = 0x6e786c64;      // "nxld"
constexpr std::uint64_t kNthetaLadderBase = 0x6e746c64;    // "ntld"

std::vector<double> data_or_simulate(const ExperimentConfig& cfg, const std::optional<std::filesystem::path>& data) {
  if (data) return read_observations(*data);
  return simulate_from_config(cfg).observations.values;
}

void require_lg(const ExperimentConfig& cfg) {
  if (cfg.model != ModelKind::kLg) throw ConfigError("model.name", "the convergence study requires model lg");
}

void fill_ratios(std::vector<ConvergenceRow>& rows, const std::vector<std::size_t>& ladder) {
  for (std::size_t k = 1; k < rows.size(); ++k) {
    rows[k].ratio = rows[k - 1].metric / rows[k].metric;
    const double scale = static_cast<double>(ladder[k]) / static_cast<double>(ladder[k - 1]);
    rows[k].theoretical_ratio = std::sqrt(scale);
  }
}

}  // namespace

double sample_stddev(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(n - 1));
}

Simulation simulate_from_config(const ExperimentConfig& cfg) {
  return simulate(cfg.model_spec(), cfg.model_params, cfg.length, RngStream(cfg.seed));
}

Simulation cmd_simulate(const ExperimentConfig& cfg, const std::filesystem::path& out, bool with_states) {
  Simulation sim = simulate_from_config(cfg);
  CsvTable table;
  table.header = {"t", "y"};
  if (with_states) table.header.push_back("x");
  for (std::size_t t = 0; t < cfg.length; ++t) {
    std::vector<std::string> row{std::to_string(t + 1), format_real(sim.observations[t][0])};
    if (with_states) row.push_back(format_real(sim.states[t][0]));
    table.add_row(std::move(row));
  }
  write_csv(out, table);
  return sim;
}

std::vector<ForecastRow> run_forecast(const ExperimentConfig& cfg, std::span<const double> observations,
                                      const Executor& executor) {
  if (observations.empty()) throw DataError("no observations");
  const ModelSpec spec = cfg.model_spec();
  const PriorSpec prior = cfg.prior_spec();
  const SwarmConfig swarm = cfg.swarm_config(cfg.forecast_functionals());

  std::vector<ForecastRow> rows;
  rows.reserve(observations.size());
  auto record = [&](std::size_t t, const SwarmEstimate& estimate) {
    ForecastRow row;
    row.t = t;
    row.y = observations[t - 1];
    row.f1_hat = estimate.value[0];
    row.f2_hat = estimate.value[1];
    const ForecastInterval interval = forecast_interval(row.f1_hat, row.f2_hat, cfg.clamp_variance);
    row.lo = interval.lower();
    row.hi = interval.upper();
    row.log_marginal_lik = estimate.log_marginal_lik;
    rows.push_back(row);
  };

  auto [state, estimate] = instantiate_swarm(spec, prior, swarm, observations.subspan(0, 1), executor);
  record(1, estimate);
  for (std::size_t t = 2; t <= observations.size(); ++t) {
    record(t, advance_swarm(spec, state, observations.subspan(t - 1, 1), swarm, executor));
  }
  return rows;
}

CsvTable forecast_table(const std::vector<ForecastRow>& rows) {
  CsvTable table;
  table.header = {"t", "y", "f1_hat", "f2_hat", "lo", "hi"};
  const bool with_lik = !rows.empty() && rows.front().log_marginal_lik.has_value();
  if (with_lik) table.header.push_back("log_marginal_lik");
  for (const auto& r : rows) {
    std::vector<std::string> cells{std::to_string(r.t), format_real(r.y),  format_real(r.f1_hat),
                                   format_real(r.f2_hat), format_real(r.lo), format_real(r.hi)};
    if (with_lik) cells.push_back(format_real(*r.log_marginal_lik));
    table.add_row(std::move(cells));
  }
  return table;
}

void cmd_forecast(const ExperimentConfig& cfg, const std::filesystem::path& data, const std::filesystem::path& out,
                  const Executor& executor) {
  const auto observations = read_observations(data);
  write_csv(out, forecast_table(run_forecast(cfg, observations, executor)));
}

ReplicationStudy run_replication_study(const ExperimentConfig& cfg, std::span<const double> observations,
                                       const Executor& executor) {
  if (cfg.replications < 2) throw ConfigError("run.replications", "the replication study needs at least 2");
  if (observations.empty()) throw DataError("no observations");
  const ModelSpec spec = cfg.model_spec();
  const PriorSpec prior = cfg.prior_spec();
  const std::size_t length = observations.size();

  ReplicationStudy study;
  study.f2.assign(cfg.replications, std::vector<double>(length));
  for (std::size_t r = 0; r < cfg.replications; ++r) {
    const SwarmConfig swarm = cfg.swarm_config(cfg.forecast_functionals(), r);
    auto [state, estimate] = instantiate_swarm(spec, prior, swarm, observations.subspan(0, 1), executor);
    study.f2[r][0] = estimate.value[1];
    for (std::size_t t = 2; t <= length; ++t) {
      study.f2[r][t - 1] = advance_swarm(spec, state, observations.subspan(t - 1, 1), swarm, executor).value[1];
    }
  }

  study.mean.resize(length);
  study.stddev.resize(length);
  std::vector<double> column(cfg.replications);
  for (std::size_t t = 0; t < length; ++t) {
    double sum = 0.0;
    for (std::size_t r = 0; r < cfg.replications; ++r) {
      column[r] = study.f2[r][t];
      sum += column[r];
    }
    study.mean[t] = sum / static_cast<double>(cfg.replications);
    study.stddev[t] = sample_stddev(column);
  }
  return study;
}

CsvTable replication_table(const ReplicationStudy& study, bool drop_first) {
  CsvTable table;
  table.header = {"t", "mean", "std"};
  for (std::size_t t = drop_first ? 1 : 0; t < study.stddev.size(); ++t) {
    table.add_row({std::to_string(t + 1), format_real(study.mean[t]), format_real(study.stddev[t])});
  }
  return table;
}

void cmd_replication_study(const ExperimentConfig& cfg, const std::optional<std::filesystem::path>& data,
                           const std::filesystem::path& out, bool drop_first, const Executor& executor) {
  const auto observations = data_or_simulate(cfg, data);
  write_csv(out, replication_table(run_replication_study(cfg, observations, executor), drop_first));
}

std::vector<ConvergenceRow> run_nx_ladder(const ExperimentConfig& cfg, std::span<const double> observations) {
  require_lg(cfg);
  const ModelSpec spec = lg_model();
  const auto truth = kalman_run(LgParams::from_params(cfg.model_params), observations);
  const std::vector<FilterFunctional> functionals{state_component(0)};
  const RngStream root = RngStream(cfg.seed).split(kNxLadderStream);

  std::vector<ConvergenceRow> rows;
  for (const std::size_t n_x : cfg.nx_ladder) {
    double squared_error = 0.0;
    for (std::size_t r = 0; r < cfg.replications; ++r) {
      const FilterRun run = run_filter(spec, cfg.model_params, n_x, observations, functionals, root.split(n_x).split(r),
                                       FilterOptions{cfg.resampling, false});
      for (std::size_t t = 0; t < observations.size(); ++t) {
        const double error = run.steps[t].phi_hat[0] - truth[t].filtered.mean;
        squared_error += error * error;
      }
    }
    const double count = static_cast<double>(cfg.replications * observations.size());
    rows.push_back({"n_x", n_x, 1, std::sqrt(squared_error / count), std::nullopt, std::nullopt});
  }
  fill_ratios(rows, cfg.nx_ladder);
  return rows;
}

std::vector<ConvergenceRow> run_ntheta_ladder(const ExperimentConfig& cfg, std::span<const double> observations,
                                              const Executor& executor) {
  require_lg(cfg);
  if (cfg.replications < 2) throw ConfigError("run.replications", "the n_theta ladder needs at least 2");
  const ModelSpec spec = lg_model();
  const PriorSpec prior = cfg.prior_spec();
  const std::size_t length = observations.size();

  std::vector<ConvergenceRow> rows;
  for (std::size_t rung = 0; rung < cfg.ntheta_ladder.size(); ++rung) {
    const std::size_t n_theta = cfg.ntheta_ladder[rung];
    // estimates[t][r]
    std::vector<std::vector<double>> estimates(length, std::vector<double>(cfg.replications));
    for (std::size_t r = 0; r < cfg.replications; ++r) {
      SwarmConfig swarm = cfg.swarm_config({state_component(0)}, r);
      swarm.seed = RngStream(cfg.seed).split(kNthetaLadderBase).split(rung).next_u64();
      swarm.n_theta = n_theta;
      swarm.n_particles = cfg.ladder_particles;
      swarm.estimator = Estimator::kHat;
      swarm.report_marginal_likelihood = false;
      auto [state, estimate] = instantiate_swarm(spec, prior, swarm, observations.subspan(0, 1), executor);
      estimates[0][r] = estimate.value[0];
      for (std::size_t t = 2; t <= length; ++t) {
        estimates[t - 1][r] = advance_swarm(spec, state, observations.subspan(t - 1, 1), swarm, executor).value[0];
      }
    }
    double pooled_variance = 0.0;
    for (const auto& column : estimates) {
      const double sd = sample_stddev(column);
      pooled_variance += sd * sd;
    }
    const double metric = std::sqrt(pooled_variance / static_cast<double>(length));
    rows.push_back({"n_theta", cfg.ladder_particles, n_theta, metric, std::nullopt, std::nullopt});
  }
  fill_ratios(rows, cfg.ntheta_ladder);
  return rows;
}

std::vector<ConvergenceRow> run_convergence_study(const ExperimentConfig& cfg, std::span<const double> observations,
                                                  const Executor& executor) {
  auto rows = run_nx_ladder(cfg, observations);
  auto theta_rows = run_ntheta_ladder(cfg, observations, executor);
  rows.insert(rows.end(), theta_rows.begin(), theta_rows.end());
  return rows;
}

CsvTable convergence_table(const std::vector<ConvergenceRow>& rows) {
  CsvTable table;
  table.header = {"ladder", "n_x", "n_theta", "metric", "ratio", "theoretical_ratio"};
  for (const auto& r : rows) {
    table.add_row({r.ladder, std::to_string(r.n_x), std::to_string(r.n_theta), format_real(r.metric),
                   r.ratio ? format_real(*r.ratio) : std::string(),
                   r.theoretical_ratio ? format_real(*r.theoretical_ratio) : std::string()});
  }
  return table;
}

void cmd_convergence_study(const ExperimentConfig& cfg, const std::optional<std::filesystem::path>& data,
                           const std::filesystem::path& out, const Executor& executor) {
  require_lg(cfg);
  const auto observations = data_or_simulate(cfg, data);
  write_csv(out, convergence_table(run_convergence_study(cfg, observations, executor)));
}

}  // namespace pswarm::experiments
