// Command-line harness for the particle swarm filter experiments.
//
//   pswarm simulate    --config C --out data.csv [--with-states]
//   pswarm forecast    --config C --data data.csv --out forecast.csv
//   pswarm replicate   --config C [--data data.csv] --out std.csv [--drop-first]
//   pswarm convergence --config C [--data data.csv] --out table.csv
//   pswarm validate    --config C [--probes N]
//
// Exit codes: 0 success, 2 config error, 3 data error, 4 numerical failure.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "experiments/commands.hpp"
#include "experiments/config.hpp"
#include "pswarm/errors.hpp"
#include "pswarm/validate.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<std::string> estimator;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "Experiment config file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", flags.seed, "Override run.seed");
  cmd->add_option("--workers", flags.workers, "Worker threads (wall time only, never output)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--estimator", flags.estimator, "Per-filter estimator")->check(CLI::IsMember({"hat", "check"}));
}

pswarm::experiments::ExperimentConfig load_config(const CommonFlags& flags) {
  auto cfg = pswarm::experiments::ExperimentConfig::load(flags.config);
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.workers) cfg.workers = *flags.workers;
  if (flags.estimator) {
    cfg.estimator = *flags.estimator == "check" ? pswarm::Estimator::kCheck : pswarm::Estimator::kHat;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  namespace ex = pswarm::experiments;

  CLI::App app{"Particle swarm filter experiments"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string out_path;
  std::string data_path;
  bool with_states = false;
  bool drop_first = false;
  std::size_t probes = 1000;

  auto* simulate = app.add_subcommand("simulate", "Simulate a series from the configured model");
  add_common(simulate, flags);
  simulate->add_option("--out", out_path, "Output CSV (t,y[,x])")->required();
  simulate->add_flag("--with-states", with_states, "Also write the latent states");

  auto* forecast = app.add_subcommand("forecast", "Posterior predictive forecasts over a data series");
  add_common(forecast, flags);
  forecast->add_option("--data", data_path, "Input CSV with header t,y")->required();
  forecast->add_option("--out", out_path, "Output CSV")->required();

  auto* replicate = app.add_subcommand("replicate", "Replication study of the f2 forecast estimate");
  add_common(replicate, flags);
  replicate->add_option("--data", data_path, "Input CSV; simulated from the config when omitted");
  replicate->add_option("--out", out_path, "Output CSV")->required();
  replicate->add_flag("--drop-first", drop_first, "Omit t = 1 from the output");

  auto* convergence = app.add_subcommand("convergence", "Monte Carlo rate study against the Kalman filter");
  add_common(convergence, flags);
  convergence->add_option("--data", data_path, "Input CSV; simulated from the config when omitted");
  convergence->add_option("--out", out_path, "Output CSV")->required();

  auto* validate = app.add_subcommand("validate", "Probe the configured model for weight/density failures");
  add_common(validate, flags);
  validate->add_option("--probes", probes, "Number of probes")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    const auto cfg = load_config(flags);
    const pswarm::Executor executor(cfg.workers);
    const std::optional<std::filesystem::path> data =
        data_path.empty() ? std::nullopt : std::optional<std::filesystem::path>(data_path);

    if (*simulate) {
      ex::cmd_simulate(cfg, out_path, with_states);
    } else if (*forecast) {
      ex::cmd_forecast(cfg, data_path, out_path, executor);
    } else if (*replicate) {
      ex::cmd_replication_study(cfg, data, out_path, drop_first, executor);
    } else if (*convergence) {
      ex::cmd_convergence_study(cfg, data, out_path, executor);
    } else if (*validate) {
      const auto report =
          pswarm::validate_model(cfg.model_spec(), cfg.prior_spec(), probes, pswarm::RngStream(cfg.seed));
      for (const auto& v : report.violations) std::cout << "probe " << v.probe << ": " << v.what << '\n';
      std::cout << report.probes.size() << " probes, " << report.violations.size() << " violations\n";
      return report.ok() ? 0 : kExitNumerical;
    }
  } catch (const ex::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  } catch (const ex::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const pswarm::AllWeightsZero& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const pswarm::Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ex::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
