#include <gtest/gtest.h>

#include <cmath>

#include "experiments/commands.hpp"
#include "pswarm/kalman.hpp"
#include "support/stats.hpp"
#include "support/temp_dir.hpp"

namespace pswarm::experiments {
namespace {

ExperimentConfig sv_config(std::size_t length, std::size_t n_theta = 10, std::size_t n_particles = 50) {
  ExperimentConfig cfg = ExperimentConfig::from_document(IniDocument::parse("[model]\nname = sv\n"));
  cfg.length = length;
  cfg.n_theta = n_theta;
  cfg.n_particles = n_particles;
  cfg.seed = 11;
  return cfg;
}

ExperimentConfig lg_config(std::size_t length) {
  ExperimentConfig cfg = ExperimentConfig::from_document(IniDocument::parse("[model]\nname = lg\n"));
  cfg.length = length;
  cfg.seed = 21;
  return cfg;
}

TEST(Simulate, WritesOneRowPerStep) {
  testing::TempDir dir;
  const auto cfg = sv_config(40);
  const Simulation sim = cmd_simulate(cfg, dir.file("sim.csv"), true);
  const CsvTable table = read_csv(dir.file("sim.csv"));
  EXPECT_EQ(table.header, (std::vector<std::string>{"t", "y", "x"}));
  ASSERT_EQ(table.rows.size(), 40u);
  EXPECT_EQ(table.numbers("y"), sim.observations.values);
  EXPECT_EQ(table.numbers("x"), sim.states.values);
  EXPECT_EQ(read_observations(dir.file("sim.csv")), sim.observations.values);
}

TEST(Simulate, SingleStepAndReproducibleBytes) {
  testing::TempDir dir;
  const auto cfg = sv_config(1);
  cmd_simulate(cfg, dir.file("a.csv"), false);
  cmd_simulate(cfg, dir.file("b.csv"), false);
  EXPECT_EQ(read_csv(dir.file("a.csv")).rows.size(), 1u);
  EXPECT_EQ(testing::slurp(dir.file("a.csv")), testing::slurp(dir.file("b.csv")));
}

TEST(Forecast, SvRowsAndIntervals) {
  const auto cfg = sv_config(30);
  const auto y = simulate_from_config(cfg).observations.values;
  const auto rows = run_forecast(cfg, y);
  ASSERT_EQ(rows.size(), 30u);
  for (std::size_t t = 0; t < rows.size(); ++t) {
    EXPECT_EQ(rows[t].t, t + 1);
    EXPECT_EQ(rows[t].y, y[t]);
    EXPECT_EQ(rows[t].f1_hat, 0.0);
    EXPECT_GT(rows[t].f2_hat, 0.0);
    EXPECT_GE(rows[t].hi, rows[t].lo);
    EXPECT_NEAR(rows[t].hi, 2.0 * std::sqrt(rows[t].f2_hat), 1e-12);
  }
  EXPECT_FALSE(rows.front().log_marginal_lik.has_value());
}

TEST(Forecast, MarginalLikelihoodColumnWhenRequested) {
  testing::TempDir dir;
  auto cfg = sv_config(5);
  cfg.outputs.push_back(Output::kMarginalLik);
  cmd_simulate(cfg, dir.file("y.csv"), false);
  cmd_forecast(cfg, dir.file("y.csv"), dir.file("f.csv"));
  const CsvTable table = read_csv(dir.file("f.csv"));
  EXPECT_EQ(table.header.back(), "log_marginal_lik");
  ASSERT_EQ(table.rows.size(), 5u);
  for (double v : table.numbers("log_marginal_lik")) EXPECT_TRUE(std::isfinite(v));
}

TEST(Forecast, WorkerCountDoesNotChangeBytes) {
  testing::TempDir dir;
  const auto cfg = sv_config(25, 16, 40);
  cmd_simulate(cfg, dir.file("y.csv"), false);
  cmd_forecast(cfg, dir.file("y.csv"), dir.file("one.csv"), Executor(1));
  cmd_forecast(cfg, dir.file("y.csv"), dir.file("four.csv"), Executor(4));
  EXPECT_EQ(testing::slurp(dir.file("one.csv")), testing::slurp(dir.file("four.csv")));
}

TEST(Forecast, LinearGaussianMatchesExactPredictive) {
  auto cfg = lg_config(20);
  cfg.n_theta = 4;
  cfg.n_particles = 1000;
  const auto y = simulate_from_config(cfg).observations.values;
  const LgParams p = LgParams::from_params(cfg.model_params);
  const auto exact = kalman_run(p, y);
  std::vector<std::vector<double>> f1(y.size()), f2(y.size());
  for (std::uint64_t rep = 0; rep < 30; ++rep) {
    cfg.seed = 300 + rep;
    const auto rows = run_forecast(cfg, y);
    for (std::size_t t = 0; t < y.size(); ++t) {
      f1[t].push_back(rows[t].f1_hat);
      f2[t].push_back(rows[t].f2_hat);
    }
  }
  for (std::size_t t = 0; t < y.size(); ++t) {
    const double mean = exact[t].forecast_mean(p);
    const double second = exact[t].forecast_var(p) + mean * mean;
    EXPECT_LE(std::abs(testing::mean(f1[t]) - mean), 4.0 * testing::standard_error(f1[t])) << "t=" << t + 1;
    EXPECT_LE(std::abs(testing::mean(f2[t]) - second), 4.0 * testing::standard_error(f2[t])) << "t=" << t + 1;
  }
}

TEST(Forecast, EmptyDataIsADataError) {
  EXPECT_THROW(run_forecast(sv_config(5), std::vector<double>{}), DataError);
}

TEST(ReplicationStudy, TwoReplicatesGiveHalfRootTwoSpread) {
  auto cfg = sv_config(12, 5, 30);
  cfg.replications = 2;
  const auto y = simulate_from_config(cfg).observations.values;
  const ReplicationStudy study = run_replication_study(cfg, y);
  ASSERT_EQ(study.f2.size(), 2u);
  for (std::size_t t = 0; t < y.size(); ++t) {
    EXPECT_NEAR(study.stddev[t], std::abs(study.f2[0][t] - study.f2[1][t]) / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(study.mean[t], 0.5 * (study.f2[0][t] + study.f2[1][t]), 1e-12);
  }
  EXPECT_NE(study.f2[0].back(), study.f2[1].back());
}

TEST(ReplicationStudy, DropFirstOmitsInitialRow) {
  testing::TempDir dir;
  auto cfg = sv_config(8, 3, 20);
  cfg.replications = 3;
  cmd_replication_study(cfg, std::nullopt, dir.file("all.csv"), false);
  cmd_replication_study(cfg, std::nullopt, dir.file("drop.csv"), true);
  const CsvTable all = read_csv(dir.file("all.csv"));
  const CsvTable drop = read_csv(dir.file("drop.csv"));
  EXPECT_EQ(all.header, (std::vector<std::string>{"t", "mean", "std"}));
  ASSERT_EQ(all.rows.size(), 8u);
  ASSERT_EQ(drop.rows.size(), 7u);
  EXPECT_EQ(drop.rows.front().front(), "2");
  EXPECT_EQ(drop.rows, std::vector<std::vector<std::string>>(all.rows.begin() + 1, all.rows.end()));
}

TEST(ReplicationStudy, NeedsTwoReplicates) {
  const auto cfg = sv_config(5);
  EXPECT_THROW(run_replication_study(cfg, simulate_from_config(cfg).observations.values), ConfigError);
}

TEST(ConvergenceStudy, SingleRungLaddersHaveNoRatio) {
  auto cfg = lg_config(10);
  cfg.replications = 3;
  cfg.nx_ladder = {50};
  cfg.ntheta_ladder = {4};
  cfg.ladder_particles = 20;
  const auto rows = run_convergence_study(cfg, simulate_from_config(cfg).observations.values);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].ladder, "n_x");
  EXPECT_EQ(rows[1].ladder, "n_theta");
  for (const auto& r : rows) {
    EXPECT_GT(r.metric, 0.0);
    EXPECT_FALSE(r.ratio.has_value());
  }
  const CsvTable table = convergence_table(rows);
  EXPECT_TRUE(std::isnan(table.number(0, "ratio")));
}

TEST(ConvergenceStudy, RatiosFollowTheLadder) {
  auto cfg = lg_config(10);
  cfg.replications = 20;
  cfg.nx_ladder = {100, 400};
  const auto rows = run_nx_ladder(cfg, simulate_from_config(cfg).observations.values);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_DOUBLE_EQ(*rows[1].theoretical_ratio, 2.0);
  EXPECT_DOUBLE_EQ(*rows[1].ratio, rows[0].metric / rows[1].metric);
  EXPECT_GT(*rows[1].ratio, 1.0);
}

TEST(ConvergenceStudy, RequiresLinearGaussianModel) {
  auto cfg = sv_config(5);
  cfg.replications = 2;
  EXPECT_THROW(run_convergence_study(cfg, simulate_from_config(cfg).observations.values), ConfigError);
}

}  // namespace
}  // namespace pswarm::experiments
