// qslab: command-line front end for bounds, sweeps, minimal-time searches,
// trajectories and the invariant check suite.
//
// Exit codes: 0 success, 1 check failure, 2 config error, 3 numerical failure.

#include "qslab/checks.hpp"
#include "qslab/experiment.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
namespace ex = qslab::experiment;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailure = 1;
constexpr int kConfigError = 2;
constexpr int kNumericalFailure = 3;

struct Common {
  std::string config_path;
  std::string out_dir;
  int jobs = 1;
  std::optional<std::uint64_t> seed;
};

ex::ExperimentConfig load(const Common& common) {
  if (common.config_path.empty()) throw ex::ConfigError("--config is required");
  std::ifstream in(common.config_path);
  if (!in) throw ex::ConfigError("cannot read config file " + common.config_path);
  std::stringstream text;
  text << in.rdbuf();
  ex::ExperimentConfig cfg = ex::ExperimentConfig::parse(text.str());
  if (common.seed) cfg.master_seed = *common.seed;
  if (!common.out_dir.empty()) cfg.outputs = common.out_dir;
  return cfg;
}

void write_file(const fs::path& dir, const std::string& name, const std::string& body) {
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body;
  std::cerr << "wrote " << path.string() << '\n';
}

void emit_json(const ex::ExperimentConfig& cfg, const std::string& name, const nlohmann::json& j) {
  const std::string body = j.dump(2) + "\n";
  std::cout << body;
  write_file(cfg.outputs, name, body);
}

template <class F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const ex::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const qslab::ScheduleError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const qslab::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const qslab::UnreachableError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

void add_common(CLI::App* sub, Common& common, bool with_config, bool with_jobs) {
  if (with_config) sub->add_option("--config", common.config_path, "Experiment config (JSON)");
  sub->add_option("--out", common.out_dir, "Output directory (overrides the config's outputs)");
  if (with_jobs) sub->add_option("--jobs", common.jobs, "Concurrent sweep points")->check(CLI::PositiveNumber);
  sub->add_option("--seed", common.seed, "Master seed (overrides the config's master_seed)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum speed-limit bounds and optimal-control experiments"};
  app.require_subcommand(1);
  Common common;
  bool corrupt_convention = false;

  auto* bound = app.add_subcommand("bound", "Schedule-independent bounds for the configured model");
  add_common(bound, common, true, false);
  auto* sweep = app.add_subcommand("sweep", "Bounds and minimal times across a parameter sweep (CSV)");
  add_common(sweep, common, true, true);
  auto* min_time = app.add_subcommand("min-time", "Bisection search for the shortest controlled time");
  add_common(min_time, common, true, false);
  auto* relax = app.add_subcommand("relax", "First-passage time of the uncontrolled dynamics");
  add_common(relax, common, true, false);
  auto* trajectory = app.add_subcommand("trajectory", "Time series of a configured schedule (CSV)");
  add_common(trajectory, common, true, false);
  auto* check = app.add_subcommand("check", "Run the invariant suite");
  add_common(check, common, false, false);
  check->add_flag("--corrupt-convention", corrupt_convention)->group("");
  auto* closed = app.add_subcommand("closed-compare", "Closed-system comparison on random instances (CSV)");
  add_common(closed, common, false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  if (*bound) {
    return guarded([&] {
      const auto cfg = load(common);
      emit_json(cfg, "bound.json", ex::bound_report_json(cfg));
      return kOk;
    });
  }
  if (*sweep) {
    return guarded([&] {
      const auto cfg = load(common);
      if (!cfg.sweep) throw ex::ConfigError("sweep: the config has no sweep section");
      const auto rows = ex::run_sweep(cfg, common.jobs);
      write_file(cfg.outputs, "sweep.csv", ex::sweep_csv(rows));
      for (const auto& r : rows) {
        if (r.status != "ok") return kNumericalFailure;
      }
      return kOk;
    });
  }
  if (*min_time) {
    return guarded([&] {
      const auto cfg = load(common);
      emit_json(cfg, "min_time.json", ex::min_time_json(cfg));
      return kOk;
    });
  }
  if (*relax) {
    return guarded([&] {
      const auto cfg = load(common);
      emit_json(cfg, "relax.json", ex::relax_json(cfg));
      return kOk;
    });
  }
  if (*trajectory) {
    return guarded([&] {
      const auto cfg = load(common);
      write_file(cfg.outputs, "trajectory.csv", ex::trajectory_csv(cfg));
      return kOk;
    });
  }
  if (*check) {
    return guarded([&] {
      qslab::checks::CheckOptions opts;
      opts.seed = common.seed.value_or(0);
      opts.corrupt_convention = corrupt_convention;
      const auto summary = qslab::checks::run_checks(opts);
      qslab::checks::print_summary(summary, std::cout);
      return summary.all_passed() ? kOk : kCheckFailure;
    });
  }
  return guarded([&] {
    const auto result = ex::closed_compare(common.seed.value_or(0));
    write_file(common.out_dir.empty() ? "out" : common.out_dir, "closed_compare.csv", result.csv);
    std::cout << result.instances << " instances, " << result.failures << " with a violated inequality\n";
    return result.failures == 0 ? kOk : kCheckFailure;
  });
}
