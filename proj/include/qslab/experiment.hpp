#pragma once

// Config-driven experiments: model construction from JSON, parameter sweeps,
// bound reports, relaxation and minimal-time runs, and trajectory export.

#include "qslab/bounds.hpp"
#include "qslab/control.hpp"
#include "qslab/models.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qslab::experiment {

/// Malformed or inconsistent configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr int kSchemaVersion = 1;

struct SingleQubitModel {
  double omega = 1.0;
  double gamma = 1.0;
};

struct BellModel {
  double omega = 1.0;
  double gamma = 1.0;
  models::BellControls controls = models::BellControls::Collective;
  models::BellJumps jumps = models::BellJumps::Ground;
};

struct IsingDaviesModel {
  models::IsingSpec ising = models::IsingSpec::extensive_antiferromagnet(4);
  models::BathSpec bath{};
};

using ModelSpec = std::variant<SingleQubitModel, BellModel, IsingDaviesModel>;

struct SweepSpec {
  std::string parameter;
  std::vector<double> values;
};

enum class TrajectorySchedule { Zero, Optimized, Explicit };

struct TrajectorySpec {
  TrajectorySchedule schedule = TrajectorySchedule::Optimized;
  /// Required for Zero and Explicit; Optimized (the default) uses the minimal time found.
  std::optional<double> total_time;
  Index samples = 200;
  std::optional<RealMatrix> amplitudes;  // intervals x controls, Explicit only
};

struct ExperimentConfig {
  ModelSpec model = SingleQubitModel{};
  std::optional<SweepSpec> sweep;
  OptimizerConfig optimizer{};
  std::optional<double> upper_bracket;
  std::string outputs = "out";
  std::uint64_t master_seed = 0;
  TrajectorySpec trajectory{};

  /// Strict parse: unknown keys, wrong types and out-of-range values throw
  /// ConfigError.
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig parse(const std::string& text);
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Names accepted as sweep parameters for the model's kind.
std::vector<std::string> sweep_parameters(const ModelSpec& model);
/// Copy of `model` with one parameter replaced. "temperature" sets beta = 1/value.
ModelSpec with_parameter(const ModelSpec& model, const std::string& name, double value);
ControlSystem build_system(const ModelSpec& model);

/// Definitional bound (sqrt(d) ||L||_{2->2}, numerator ||rho_T - rho0||_1) and
/// the printed closed form where one exists (single qubit: numerator 1 and
/// coherence denominator); equal to the definitional bound otherwise.
struct BoundPair {
  double definitional = 0.0;
  double paper_variant = 0.0;
};
BoundPair bound_pair(const ModelSpec& model);

nlohmann::json bound_report_json(const ExperimentConfig& cfg);

struct SweepRow {
  std::size_t index = 0;
  std::string param_name;
  double param_value = 0.0;
  double bound_definitional = 0.0;
  double bound_paper_variant = 0.0;
  double t_uncontrolled = 0.0;
  double t_controlled = 0.0;
  double achieved_distance = 0.0;
  int restarts_used = 0;
  std::uint64_t seed = 0;
  std::string status = "ok";
};

/// Seed handed to the optimizer at sweep point `index`.
std::uint64_t point_seed(std::uint64_t master_seed, std::size_t index);

SweepRow run_sweep_point(const ExperimentConfig& cfg, std::size_t index);
/// Runs every sweep point on up to `jobs` threads; rows come back in sweep order.
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, int jobs);
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Doubles as text with 17 significant digits; "nan", "inf", "-inf" otherwise.
std::string format_double(double x);

nlohmann::json relax_json(const ExperimentConfig& cfg);
nlohmann::json min_time_json(const ExperimentConfig& cfg);

/// Time series of the configured trajectory. Single qubit: t, sx, sy, sz,
/// trace_distance. Larger models: t, p_0 .. p_{d-1}, trace_distance.
std::string trajectory_csv(const ExperimentConfig& cfg);

/// Random pure-state pairs and Hamiltonians compared against the
/// Bures/variance bound; returns CSV and whether every flag held.
struct ClosedCompareResult {
  std::string csv;
  int instances = 0;
  int failures = 0;
};
ClosedCompareResult closed_compare(std::uint64_t seed, int instances_per_dim = 100,
                                   const std::vector<Index>& dims = {2, 4, 8});

}  // namespace qslab::experiment
