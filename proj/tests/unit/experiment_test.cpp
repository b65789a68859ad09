#include "qslab/experiment.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace qslab;
using namespace qslab::experiment;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

const char* kQubitSweep = R"({
  "schema_version": 1,
  "model": {"type": "single_qubit", "omega": 1.0, "gamma": 1.0},
  "sweep": {"parameter": "gamma", "values": [0.1, 1.0, 10.0]},
  "optimizer": {"restarts": 4},
  "master_seed": 7
})";

}  // namespace

TEST(Config, ParsesDefaultsAndRoundTrips) {
  const ExperimentConfig cfg = ExperimentConfig::parse(kQubitSweep);
  ASSERT_TRUE(cfg.sweep.has_value());
  EXPECT_EQ(cfg.sweep->values.size(), 3u);
  EXPECT_EQ(cfg.optimizer.restarts, 4);
  EXPECT_EQ(cfg.optimizer.intervals, 20);
  EXPECT_EQ(cfg.master_seed, 7u);
  const ExperimentConfig again = ExperimentConfig::from_json(cfg.to_json());
  EXPECT_EQ(again.to_json(), cfg.to_json());
}

TEST(Config, IsingOptionsAndTemperature) {
  const ExperimentConfig cfg = ExperimentConfig::parse(R"({
    "schema_version": 1,
    "model": {"type": "ising_davies", "n_spins": 3, "h": 0.5, "J": 0.25, "temperature": 4.0, "eta_g2": 0.01},
    "sweep": {"parameter": "temperature", "values": [1, 10]}
  })");
  const auto& m = std::get<IsingDaviesModel>(cfg.model);
  EXPECT_EQ(m.ising.n_spins, 3);
  EXPECT_EQ(m.ising.fields, std::vector<double>(3, 0.5));
  EXPECT_EQ(m.ising.couplings[1][2], 0.25);
  EXPECT_DOUBLE_EQ(m.bath.beta, 0.25);
  EXPECT_DOUBLE_EQ(m.bath.eta_g2, 0.01);
  const auto hot = std::get<IsingDaviesModel>(with_parameter(cfg.model, "temperature", 10.0));
  EXPECT_DOUBLE_EQ(hot.bath.beta, 0.1);
  EXPECT_EQ(ExperimentConfig::from_json(cfg.to_json()).to_json(), cfg.to_json());
}

TEST(Config, RejectsMalformedInput) {
  const std::vector<std::string> bad{
      "{",
      R"({"model": {"type": "single_qubit"}})",
      R"({"schema_version": 2, "model": {"type": "single_qubit"}})",
      R"({"schema_version": 1, "model": {"type": "qutrit"}})",
      R"({"schema_version": 1, "model": {"type": "single_qubit", "omegaa": 1}})",
      R"({"schema_version": 1, "model": {"type": "single_qubit", "gamma": -1}})",
      R"({"schema_version": 1, "model": {"type": "single_qubit"}, "sweep": {"parameter": "gamma", "values": []}})",
      R"({"schema_version": 1, "model": {"type": "single_qubit"}, "sweep": {"parameter": "beta", "values": [1]}})",
      R"({"schema_version": 1, "model": {"type": "single_qubit"}, "optimizer": {"target_distance": 1.5}})",
      R"({"schema_version": 1, "model": {"type": "single_qubit"}, "optimizer": {"restarts": 2.5}})",
      R"({"schema_version": 1, "model": {"type": "ising_davies", "n_spins": 6}})",
      R"({"schema_version": 1, "model": {"type": "ising_davies", "couplings": [[0, 1], [2, 0]], "n_spins": 2}})",
      R"({"schema_version": 1, "model": {"type": "bell", "controls": "all"}})",
      R"({"schema_version": 1, "model": {"type": "single_qubit"}, "trajectory": {"schedule": "zero"}})",
      R"({"schema_version": 1, "model": {"type": "single_qubit"}, "master_seed": -3})",
  };
  for (const auto& text : bad) EXPECT_THROW(ExperimentConfig::parse(text), ConfigError) << text;
}

TEST(Format, SeventeenSignificantDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  EXPECT_EQ(format_double(-INFINITY), "-inf");
  EXPECT_EQ(std::stod(format_double(M_PI)), M_PI);
}

TEST(Bound, JsonReport) {
  const ExperimentConfig q = ExperimentConfig::parse(
      R"({"schema_version": 1, "model": {"type": "single_qubit", "omega": 1, "gamma": 0.1}})");
  const auto j = bound_report_json(q);
  EXPECT_NEAR(j["bound_definitional"].get<double>(), 0.49938, 5e-6);
  EXPECT_NEAR(j["bound_paper_variant"].get<double>(), 0.35311, 5e-6);
  EXPECT_EQ(j["single_qubit"]["regime"], "coherence");
  const ExperimentConfig b =
      ExperimentConfig::parse(R"({"schema_version": 1, "model": {"type": "bell", "omega": 1, "gamma": 1}})");
  EXPECT_NEAR(bound_report_json(b)["numerator"].get<double>(), 2.0, 1e-14);
}

TEST(Sweep, QubitGammaSweepRowsAndConsistency) {
  const ExperimentConfig cfg = ExperimentConfig::parse(kQubitSweep);
  const auto rows = run_sweep(cfg, 1);
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].index, i);
    EXPECT_EQ(rows[i].status, "ok");
    EXPECT_GE(rows[i].t_controlled, rows[i].bound_definitional);
    EXPECT_LE(rows[i].t_controlled, rows[i].t_uncontrolled);
    EXPECT_LE(rows[i].achieved_distance, 0.1);
    EXPECT_EQ(rows[i].seed, point_seed(7, i));
  }
  const auto csv = parse_csv(sweep_csv(rows));
  ASSERT_EQ(csv.size(), 4u);
  EXPECT_EQ(csv[0], (std::vector<std::string>{"param_name", "param_value", "bound_definitional",
                                               "bound_paper_variant", "t_uncontrolled", "t_controlled",
                                               "achieved_distance", "restarts_used", "seed", "status"}));
  EXPECT_EQ(csv[2][0], "gamma");
  EXPECT_EQ(std::stod(csv[2][5]), rows[1].t_controlled);
}

TEST(Sweep, JobsDoNotChangeOutput) {
  const ExperimentConfig cfg = ExperimentConfig::parse(kQubitSweep);
  EXPECT_EQ(sweep_csv(run_sweep(cfg, 1)), sweep_csv(run_sweep(cfg, 3)));
}

TEST(Sweep, FailedPointsBecomeStatusRows) {
  ExperimentConfig cfg = ExperimentConfig::parse(R"({
    "schema_version": 1,
    "model": {"type": "single_qubit", "omega": 1.0, "gamma": 1.0},
    "sweep": {"parameter": "gamma", "values": [0.0, 1.0]},
    "optimizer": {"first_passage_max_steps": 1000}
  })");
  const auto rows = run_sweep(cfg, 2);
  EXPECT_EQ(rows[0].status, "does_not_relax");
  EXPECT_TRUE(std::isnan(rows[0].t_controlled));
  EXPECT_EQ(rows[1].status, "ok");
  cfg.model = SingleQubitModel{0.0, 1.0};
  cfg.sweep->values = {0.0};
  EXPECT_EQ(run_sweep(cfg, 1)[0].status, "unreachable");
}

TEST(Trajectory, UncontrolledDampedQubit) {
  const ExperimentConfig cfg = ExperimentConfig::parse(R"({
    "schema_version": 1,
    "model": {"type": "single_qubit", "omega": 0.0, "gamma": 1.0},
    "trajectory": {"schedule": "zero", "total_time": 2.0, "samples": 40}
  })");
  const auto csv = parse_csv(trajectory_csv(cfg));
  ASSERT_EQ(csv.size(), 42u);
  EXPECT_EQ(csv[0], (std::vector<std::string>{"t", "sx", "sy", "sz", "trace_distance"}));
  EXPECT_NEAR(std::stod(csv[1][1]), -1.0, 1e-15);  // <sigma_x> of |->
  EXPECT_NEAR(std::stod(csv[1][3]), 0.0, 1e-15);
  for (std::size_t k = 1; k < csv.size(); ++k) {
    const double t = std::stod(csv[k][0]);
    EXPECT_NEAR(std::stod(csv[k][3]), 1.0 - std::exp(-2.0 * t), 1e-12);
    EXPECT_NEAR(std::stod(csv[k][2]), 0.0, 1e-14);
    EXPECT_NEAR(std::stod(csv[k][1]), -std::exp(-t), 1e-12);
  }
}

TEST(Trajectory, ExplicitAndMultiQubitColumns) {
  const ExperimentConfig cfg = ExperimentConfig::parse(R"({
    "schema_version": 1,
    "model": {"type": "bell", "omega": 1.0, "gamma": 1.0},
    "trajectory": {"schedule": "explicit", "total_time": 1.0, "samples": 4, "amplitudes": [[1.0], [-2.0]]}
  })");
  const auto csv = parse_csv(trajectory_csv(cfg));
  EXPECT_EQ(csv[0], (std::vector<std::string>{"t", "p_0", "p_1", "p_2", "p_3", "trace_distance"}));
  ASSERT_EQ(csv.size(), 6u);
  for (std::size_t k = 1; k < csv.size(); ++k) {
    double total = 0.0;
    for (int a = 1; a <= 4; ++a) total += std::stod(csv[k][static_cast<std::size_t>(a)]);
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
  EXPECT_NEAR(std::stod(csv[1][5]), 1.0, 1e-14);
}

TEST(Trajectory, OptimizedReachesTarget) {
  const ExperimentConfig cfg = ExperimentConfig::parse(R"({
    "schema_version": 1,
    "model": {"type": "single_qubit", "omega": 1.0, "gamma": 1.0},
    "trajectory": {"schedule": "optimized", "samples": 20}
  })");
  const auto csv = parse_csv(trajectory_csv(cfg));
  EXPECT_LE(std::stod(csv.back().back()), 0.1);
  EXPECT_EQ(trajectory_csv(cfg), trajectory_csv(cfg));
}

TEST(Relax, Json) {
  const ExperimentConfig cfg = ExperimentConfig::parse(
      R"({"schema_version": 1, "model": {"type": "single_qubit", "omega": 5, "gamma": 1}})");
  EXPECT_NEAR(relax_json(cfg)["t_uncontrolled"].get<double>(), 1.6283, 1e-4);
}

TEST(ClosedCompare, AllInstancesHold) {
  const ClosedCompareResult r = closed_compare(5);
  EXPECT_EQ(r.instances, 300);
  EXPECT_EQ(r.failures, 0);
  EXPECT_EQ(parse_csv(r.csv).size(), 301u);
  EXPECT_EQ(closed_compare(5).csv, r.csv);
}
