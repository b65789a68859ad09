#include "qslab/experiment.hpp"

#include "qslab/norms.hpp"
#include "qslab/operators.hpp"
#include "qslab/random.hpp"
#include "qslab/seeding.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace qslab::experiment {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& item : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) throw ConfigError(where + ": unknown key \"" + item.key() + "\"");
  }
}

double number(const json& j, const char* key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + "." + key + ": must be finite");
  return x;
}

long long integer(const json& j, const char* key, long long fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<long long>();
}

bool boolean(const json& j, const char* key, bool fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean()) throw ConfigError(where + "." + key + ": expected true or false");
  return v.get<bool>();
}

std::vector<double> number_list(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(where + ": expected an array of numbers");
    out.push_back(x.get<double>());
    if (!std::isfinite(out.back())) throw ConfigError(where + ": values must be finite");
  }
  return out;
}

ModelSpec parse_model(const json& j) {
  const std::string where = "model";
  require_object(j, where);
  if (!j.contains("type") || !j.at("type").is_string()) throw ConfigError("model.type: expected a string");
  const auto type = j.at("type").get<std::string>();
  if (type == "single_qubit") {
    check_keys(j, {"type", "omega", "gamma"}, where);
    return SingleQubitModel{number(j, "omega", 1.0, where), number(j, "gamma", 1.0, where)};
  }
  if (type == "bell") {
    check_keys(j, {"type", "omega", "gamma", "controls", "jumps"}, where);
    BellModel m{number(j, "omega", 1.0, where), number(j, "gamma", 1.0, where), models::BellControls::Collective,
                models::BellJumps::Ground};
    if (j.contains("controls")) {
      const json& c = j.at("controls");
      if (c == "collective") {
        m.controls = models::BellControls::Collective;
      } else if (c == "independent") {
        m.controls = models::BellControls::Independent;
      } else {
        throw ConfigError("model.controls: expected \"collective\" or \"independent\"");
      }
    }
    if (j.contains("jumps")) {
      const json& s = j.at("jumps");
      if (s == "ground") {
        m.jumps = models::BellJumps::Ground;
      } else if (s == "target") {
        m.jumps = models::BellJumps::Target;
      } else {
        throw ConfigError("model.jumps: expected \"ground\" or \"target\"");
      }
    }
    return m;
  }
  if (type == "ising_davies") {
    check_keys(j, {"type", "n_spins", "h", "fields", "J", "couplings", "include_diagonal", "beta",
                   "temperature", "omega_c", "eta_g2"},
               where);
    const auto n = integer(j, "n_spins", 4, where);
    if (n < 1 || n > 4) throw ConfigError("model.n_spins: must be in 1..4");
    IsingDaviesModel m;
    m.ising = models::IsingSpec::extensive_antiferromagnet(static_cast<int>(n));
    const auto nu = static_cast<std::size_t>(n);
    if (j.contains("h") && j.contains("fields")) throw ConfigError("model: give either h or fields");
    if (j.contains("J") && j.contains("couplings")) throw ConfigError("model: give either J or couplings");
    if (j.contains("h")) m.ising.fields.assign(nu, number(j, "h", 1.0, where));
    if (j.contains("fields")) m.ising.fields = number_list(j.at("fields"), "model.fields");
    if (j.contains("J")) {
      m.ising.couplings.assign(nu, std::vector<double>(nu, number(j, "J", 0.0, where)));
    }
    if (j.contains("couplings")) {
      const json& c = j.at("couplings");
      if (!c.is_array()) throw ConfigError("model.couplings: expected an N x N array");
      m.ising.couplings.clear();
      for (const auto& row : c) m.ising.couplings.push_back(number_list(row, "model.couplings"));
    }
    m.ising.include_diagonal = boolean(j, "include_diagonal", true, where);
    if (j.contains("beta") && j.contains("temperature")) throw ConfigError("model: give either beta or temperature");
    m.bath.beta = number(j, "beta", 1.0, where);
    if (j.contains("temperature")) {
      const double t = number(j, "temperature", 1.0, where);
      if (!(t > 0.0)) throw ConfigError("model.temperature: must be positive");
      m.bath.beta = 1.0 / t;
    }
    m.bath.omega_c = number(j, "omega_c", m.bath.omega_c, where);
    m.bath.eta_g2 = number(j, "eta_g2", m.bath.eta_g2, where);
    try {
      m.ising.validate();
      m.bath.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("model: ") + e.what());
    }
    return m;
  }
  throw ConfigError("model.type: unknown model \"" + type + "\"");
}

void validate_rates(const ModelSpec& model) {
  auto check = [](double omega, double gamma) {
    if (!(omega >= 0.0) || !(gamma >= 0.0)) throw ConfigError("model: omega and gamma must be non-negative");
  };
  if (const auto* s = std::get_if<SingleQubitModel>(&model)) check(s->omega, s->gamma);
  if (const auto* b = std::get_if<BellModel>(&model)) check(b->omega, b->gamma);
}

OptimizerConfig parse_optimizer(const json& j, std::optional<double>& upper_bracket) {
  const std::string where = "optimizer";
  require_object(j, where);
  check_keys(j, {"target_distance", "restarts", "max_iterations", "fd_step", "intervals", "amplitude_cap",
                 "bracket_relative_width", "gradient_tolerance", "stop_at_target", "warm_start",
                 "grid_points_per_unit", "horizon", "first_passage_max_steps", "upper_bracket"},
             where);
  OptimizerConfig c;
  c.target_distance = number(j, "target_distance", c.target_distance, where);
  c.restarts = static_cast<int>(integer(j, "restarts", c.restarts, where));
  c.max_iterations = static_cast<int>(integer(j, "max_iterations", c.max_iterations, where));
  c.fd_step = number(j, "fd_step", c.fd_step, where);
  c.intervals = static_cast<Index>(integer(j, "intervals", c.intervals, where));
  c.amplitude_cap = number(j, "amplitude_cap", c.amplitude_cap, where);
  c.bracket_relative_width = number(j, "bracket_relative_width", c.bracket_relative_width, where);
  c.gradient_tolerance = number(j, "gradient_tolerance", c.gradient_tolerance, where);
  c.stop_at_target = boolean(j, "stop_at_target", c.stop_at_target, where);
  c.warm_start = boolean(j, "warm_start", c.warm_start, where);
  c.grid_points_per_unit = number(j, "grid_points_per_unit", c.grid_points_per_unit, where);
  c.horizon = number(j, "horizon", c.horizon, where);
  c.first_passage_max_steps = integer(j, "first_passage_max_steps", c.first_passage_max_steps, where);
  if (j.contains("upper_bracket")) {
    upper_bracket = number(j, "upper_bracket", 0.0, where);
    if (!(*upper_bracket > 0.0)) throw ConfigError("optimizer.upper_bracket: must be positive");
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

TrajectorySpec parse_trajectory(const json& j) {
  const std::string where = "trajectory";
  require_object(j, where);
  check_keys(j, {"schedule", "total_time", "samples", "amplitudes"}, where);
  TrajectorySpec t;
  if (j.contains("schedule")) {
    const json& s = j.at("schedule");
    if (s == "zero") {
      t.schedule = TrajectorySchedule::Zero;
    } else if (s == "optimized") {
      t.schedule = TrajectorySchedule::Optimized;
    } else if (s == "explicit") {
      t.schedule = TrajectorySchedule::Explicit;
    } else {
      throw ConfigError("trajectory.schedule: expected \"zero\", \"optimized\" or \"explicit\"");
    }
  }
  if (j.contains("total_time")) {
    t.total_time = number(j, "total_time", 0.0, where);
    if (!(*t.total_time > 0.0)) throw ConfigError("trajectory.total_time: must be positive");
  }
  const auto samples = integer(j, "samples", t.samples, where);
  if (samples < 1) throw ConfigError("trajectory.samples: must be positive");
  t.samples = static_cast<Index>(samples);
  if (j.contains("amplitudes")) {
    const json& a = j.at("amplitudes");
    if (!a.is_array() || a.empty()) throw ConfigError("trajectory.amplitudes: expected a nonempty array of rows");
    std::vector<std::vector<double>> rows;
    for (const auto& r : a) rows.push_back(number_list(r, "trajectory.amplitudes"));
    const std::size_t cols = rows.front().size();
    if (cols == 0) throw ConfigError("trajectory.amplitudes: rows must be nonempty");
    RealMatrix m(static_cast<Index>(rows.size()), static_cast<Index>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw ConfigError("trajectory.amplitudes: rows differ in length");
      for (std::size_t c = 0; c < cols; ++c) m(static_cast<Index>(i), static_cast<Index>(c)) = rows[i][c];
    }
    t.amplitudes = std::move(m);
  }
  if (t.schedule != TrajectorySchedule::Optimized && !t.total_time) {
    throw ConfigError("trajectory.total_time: required unless schedule is \"optimized\"");
  }
  if (t.schedule == TrajectorySchedule::Explicit && !t.amplitudes) {
    throw ConfigError("trajectory.amplitudes: required for an explicit schedule");
  }
  if (t.schedule != TrajectorySchedule::Explicit && t.amplitudes) {
    throw ConfigError("trajectory.amplitudes: only allowed for an explicit schedule");
  }
  return t;
}

json model_to_json(const ModelSpec& model) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SingleQubitModel>) {
          return {{"type", "single_qubit"}, {"omega", m.omega}, {"gamma", m.gamma}};
        } else if constexpr (std::is_same_v<T, BellModel>) {
          return {{"type", "bell"},
                  {"omega", m.omega},
                  {"gamma", m.gamma},
                  {"controls", m.controls == models::BellControls::Collective ? "collective" : "independent"},
                  {"jumps", m.jumps == models::BellJumps::Ground ? "ground" : "target"}};
        } else {
          return {{"type", "ising_davies"},
                  {"n_spins", m.ising.n_spins},
                  {"fields", m.ising.fields},
                  {"couplings", m.ising.couplings},
                  {"include_diagonal", m.ising.include_diagonal},
                  {"beta", m.bath.beta},
                  {"omega_c", m.bath.omega_c},
                  {"eta_g2", m.bath.eta_g2}};
        }
      },
      model);
}

const char* model_name(const ModelSpec& model) {
  switch (model.index()) {
    case 0: return "single_qubit";
    case 1: return "bell";
    default: return "ising_davies";
  }
}

json schedule_json(const Schedule& s) {
  json rows = json::array();
  for (Index j = 0; j < s.intervals(); ++j) {
    json row = json::array();
    for (Index c = 0; c < s.controls(); ++c) row.push_back(s.amplitude(j, c));
    rows.push_back(row);
  }
  return {{"total_time", s.total_time()}, {"amplitude_cap", s.amplitude_cap()}, {"amplitudes", rows}};
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  require_object(j, "config");
  check_keys(j, {"schema_version", "model", "sweep", "optimizer", "outputs", "master_seed", "trajectory"}, "config");
  if (!j.contains("schema_version") || !j.at("schema_version").is_number_integer()) {
    throw ConfigError("config.schema_version: required integer");
  }
  if (j.at("schema_version").get<long long>() != kSchemaVersion) {
    throw ConfigError("config.schema_version: unsupported version " + j.at("schema_version").dump() +
                      " (expected " + std::to_string(kSchemaVersion) + ")");
  }
  if (!j.contains("model")) throw ConfigError("config.model: required");

  ExperimentConfig cfg;
  cfg.model = parse_model(j.at("model"));
  validate_rates(cfg.model);
  if (j.contains("optimizer")) cfg.optimizer = parse_optimizer(j.at("optimizer"), cfg.upper_bracket);
  if (j.contains("outputs")) {
    if (!j.at("outputs").is_string()) throw ConfigError("config.outputs: expected a directory path");
    cfg.outputs = j.at("outputs").get<std::string>();
  }
  if (j.contains("master_seed")) {
    const json& s = j.at("master_seed");
    if (!s.is_number_unsigned()) throw ConfigError("config.master_seed: expected a non-negative integer");
    cfg.master_seed = s.get<std::uint64_t>();
  }
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    require_object(s, "sweep");
    check_keys(s, {"parameter", "values"}, "sweep");
    if (!s.contains("parameter") || !s.at("parameter").is_string()) {
      throw ConfigError("sweep.parameter: required string");
    }
    SweepSpec sweep{s.at("parameter").get<std::string>(), {}};
    if (!s.contains("values")) throw ConfigError("sweep.values: required");
    sweep.values = number_list(s.at("values"), "sweep.values");
    if (sweep.values.empty()) throw ConfigError("sweep.values: list is empty");
    const auto names = sweep_parameters(cfg.model);
    if (std::find(names.begin(), names.end(), sweep.parameter) == names.end()) {
      throw ConfigError("sweep.parameter: \"" + sweep.parameter + "\" is not a parameter of model " +
                        model_name(cfg.model));
    }
    for (double v : sweep.values) {
      try {
        const ModelSpec point = with_parameter(cfg.model, sweep.parameter, v);
        validate_rates(point);
        if (const auto* m = std::get_if<IsingDaviesModel>(&point)) m->bath.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("sweep.values: ") + e.what());
      }
    }
    cfg.sweep = std::move(sweep);
  }
  if (j.contains("trajectory")) cfg.trajectory = parse_trajectory(j.at("trajectory"));
  return cfg;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return from_json(j);
}

json ExperimentConfig::to_json() const {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["model"] = model_to_json(model);
  if (sweep) j["sweep"] = {{"parameter", sweep->parameter}, {"values", sweep->values}};
  const auto& o = optimizer;
  j["optimizer"] = {{"target_distance", o.target_distance},
                    {"restarts", o.restarts},
                    {"max_iterations", o.max_iterations},
                    {"fd_step", o.fd_step},
                    {"intervals", o.intervals},
                    {"amplitude_cap", o.amplitude_cap},
                    {"bracket_relative_width", o.bracket_relative_width},
                    {"gradient_tolerance", o.gradient_tolerance},
                    {"stop_at_target", o.stop_at_target},
                    {"warm_start", o.warm_start},
                    {"grid_points_per_unit", o.grid_points_per_unit},
                    {"horizon", o.horizon},
                    {"first_passage_max_steps", o.first_passage_max_steps}};
  if (upper_bracket) j["optimizer"]["upper_bracket"] = *upper_bracket;
  j["outputs"] = outputs;
  j["master_seed"] = master_seed;
  const auto& t = trajectory;
  json tj;
  tj["schedule"] = t.schedule == TrajectorySchedule::Zero        ? "zero"
                   : t.schedule == TrajectorySchedule::Optimized ? "optimized"
                                                                 : "explicit";
  if (t.total_time) tj["total_time"] = *t.total_time;
  tj["samples"] = t.samples;
  if (t.amplitudes) {
    json rows = json::array();
    for (Index i = 0; i < t.amplitudes->rows(); ++i) {
      json row = json::array();
      for (Index c = 0; c < t.amplitudes->cols(); ++c) row.push_back((*t.amplitudes)(i, c));
      rows.push_back(row);
    }
    tj["amplitudes"] = rows;
  }
  j["trajectory"] = tj;
  return j;
}

std::vector<std::string> sweep_parameters(const ModelSpec& model) {
  if (std::holds_alternative<IsingDaviesModel>(model)) {
    return {"beta", "temperature", "h", "J", "omega_c", "eta_g2"};
  }
  return {"omega", "gamma"};
}

ModelSpec with_parameter(const ModelSpec& model, const std::string& name, double value) {
  ModelSpec out = model;
  auto unknown = [&] {
    return ConfigError("unknown parameter \"" + name + "\" for model " + model_name(model));
  };
  if (auto* s = std::get_if<SingleQubitModel>(&out)) {
    if (name == "omega") {
      s->omega = value;
    } else if (name == "gamma") {
      s->gamma = value;
    } else {
      throw unknown();
    }
  } else if (auto* b = std::get_if<BellModel>(&out)) {
    if (name == "omega") {
      b->omega = value;
    } else if (name == "gamma") {
      b->gamma = value;
    } else {
      throw unknown();
    }
  } else {
    auto& m = std::get<IsingDaviesModel>(out);
    if (name == "beta") {
      m.bath.beta = value;
    } else if (name == "temperature") {
      if (!(value > 0.0)) throw ConfigError("temperature must be positive");
      m.bath.beta = 1.0 / value;
    } else if (name == "h") {
      std::fill(m.ising.fields.begin(), m.ising.fields.end(), value);
    } else if (name == "J") {
      for (auto& row : m.ising.couplings) std::fill(row.begin(), row.end(), value);
    } else if (name == "omega_c") {
      m.bath.omega_c = value;
    } else if (name == "eta_g2") {
      m.bath.eta_g2 = value;
    } else {
      throw unknown();
    }
  }
  return out;
}

ControlSystem build_system(const ModelSpec& model) {
  return std::visit(
      [](const auto& m) -> ControlSystem {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SingleQubitModel>) {
          return models::make_single_qubit(m.omega, m.gamma);
        } else if constexpr (std::is_same_v<T, BellModel>) {
          return models::make_bell(m.omega, m.gamma, m.controls, m.jumps);
        } else {
          return models::make_ising_davies(m.ising, m.bath);
        }
      },
      model);
}

BoundPair bound_pair(const ModelSpec& model) {
  const ControlSystem sys = build_system(model);
  BoundPair out;
  out.definitional = bound_schedule_independent(sys, NormKind::SqrtDInduced22).bound;
  if (const auto* s = std::get_if<SingleQubitModel>(&model)) {
    out.paper_variant = single_qubit_analytic_bound(s->omega, s->gamma, NumeratorConvention::Unit);
  } else {
    out.paper_variant = out.definitional;
  }
  return out;
}

json bound_report_json(const ExperimentConfig& cfg) {
  const ControlSystem sys = build_system(cfg.model);
  json reports = json::array();
  for (NormKind kind : {NormKind::SqrtDInduced22, NormKind::Induced11Estimate}) {
    const BoundReport r = bound_schedule_independent(sys, kind);
    reports.push_back({{"norm_kind", to_string(kind)},
                       {"numerator", r.numerator},
                       {"denominator", r.denominator},
                       {"bound", r.bound},
                       {"notes", r.notes}});
  }
  const BoundPair pair = bound_pair(cfg.model);
  json out{{"model", model_to_json(cfg.model)},
           {"dim", sys.dim()},
           {"numerator", reports[0]["numerator"]},
           {"bound_definitional", pair.definitional},
           {"bound_paper_variant", pair.paper_variant},
           {"reports", reports}};
  if (const auto* s = std::get_if<SingleQubitModel>(&cfg.model)) {
    const auto den = single_qubit_denominators(s->omega, s->gamma);
    out["single_qubit"] = {
        {"denominator_definitional", den.definitional},
        {"denominator_coherence", den.coherence},
        {"regime", den.regime == SingleQubitRegime::CoherenceDominated ? "coherence" : "population"},
        {"analytic_bound_unit_numerator",
         single_qubit_analytic_bound(s->omega, s->gamma, NumeratorConvention::Unit)},
        {"analytic_bound_definitional_numerator",
         single_qubit_analytic_bound(s->omega, s->gamma, NumeratorConvention::Definitional)}};
  }
  return out;
}

std::uint64_t point_seed(std::uint64_t master_seed, std::size_t index) {
  return derive_seed(master_seed, {static_cast<std::uint64_t>(index)});
}

SweepRow run_sweep_point(const ExperimentConfig& cfg, std::size_t index) {
  if (!cfg.sweep) throw ConfigError("sweep: no sweep configured");
  if (index >= cfg.sweep->values.size()) throw ConfigError("sweep: point index out of range");
  SweepRow row;
  row.index = index;
  row.param_name = cfg.sweep->parameter;
  row.param_value = cfg.sweep->values[index];
  row.seed = point_seed(cfg.master_seed, index);
  row.bound_definitional = row.bound_paper_variant = kNaN;
  row.t_uncontrolled = row.t_controlled = row.achieved_distance = kNaN;

  const ModelSpec model = with_parameter(cfg.model, row.param_name, row.param_value);
  try {
    const BoundPair pair = bound_pair(model);
    row.bound_definitional = pair.definitional;
    row.bound_paper_variant = pair.paper_variant;
    const ControlSystem sys = build_system(model);
    OptimizerConfig oc = cfg.optimizer;
    oc.seed = row.seed;
    const TimeSearchResult res = find_min_time(sys, oc, cfg.upper_bracket);
    row.t_uncontrolled = res.t_uncontrolled;
    row.t_controlled = res.t_min;
    row.achieved_distance = res.achieved_distance;
    row.restarts_used = res.restarts_used;
  } catch (const UnreachableError&) {
    row.status = "unreachable";
  } catch (const DoesNotRelaxError&) {
    row.status = "does_not_relax";
  } catch (const InfeasibleBracketError&) {
    row.status = "infeasible_bracket";
  } catch (const NumericalFailure&) {
    row.status = "numerical_failure";
  } catch (const std::invalid_argument&) {
    row.status = "invalid_model";
  }
  return row;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, int jobs) {
  if (!cfg.sweep) throw ConfigError("sweep: no sweep configured");
  if (jobs < 1) throw ConfigError("--jobs must be at least 1");
  const std::size_t n = cfg.sweep->values.size();
  std::vector<SweepRow> rows(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        rows[i] = run_sweep_point(cfg, i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.index < b.index; });
  return rows;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "param_name,param_value,bound_definitional,bound_paper_variant,t_uncontrolled,t_controlled,"
         "achieved_distance,restarts_used,seed,status\n";
  for (const auto& r : rows) {
    out << r.param_name << ',' << format_double(r.param_value) << ',' << format_double(r.bound_definitional)
        << ',' << format_double(r.bound_paper_variant) << ',' << format_double(r.t_uncontrolled) << ','
        << format_double(r.t_controlled) << ',' << format_double(r.achieved_distance) << ','
        << r.restarts_used << ',' << r.seed << ',' << r.status << '\n';
  }
  return out.str();
}

json relax_json(const ExperimentConfig& cfg) {
  const ControlSystem sys = build_system(cfg.model);
  const double t = uncontrolled_first_passage(sys, cfg.optimizer.target_distance, cfg.optimizer);
  return {{"model", model_to_json(cfg.model)},
          {"target_distance", cfg.optimizer.target_distance},
          {"initial_distance", trace_distance(sys.initial(), sys.target())},
          {"t_uncontrolled", t}};
}

json min_time_json(const ExperimentConfig& cfg) {
  const ControlSystem sys = build_system(cfg.model);
  OptimizerConfig oc = cfg.optimizer;
  oc.seed = point_seed(cfg.master_seed, 0);
  const TimeSearchResult res = find_min_time(sys, oc, cfg.upper_bracket);
  json history = json::array();
  for (const auto& h : res.history) {
    history.push_back({{"lower", h.lower},
                       {"upper", h.upper},
                       {"probe", h.probe},
                       {"cost", h.cost},
                       {"feasible", h.feasible},
                       {"seed", h.seed}});
  }
  return {{"model", model_to_json(cfg.model)},
          {"target_distance", oc.target_distance},
          {"t_min", res.t_min},
          {"t_uncontrolled", finite_or_null(res.t_uncontrolled)},
          {"speedup", finite_or_null(res.t_uncontrolled / res.t_min)},
          {"lower_bound", res.lower_bound},
          {"achieved_distance", res.achieved_distance},
          {"restarts_used", res.restarts_used},
          {"seed", res.seed},
          {"history", history},
          {"schedule", schedule_json(res.schedule)}};
}

std::string trajectory_csv(const ExperimentConfig& cfg) {
  const ControlSystem sys = build_system(cfg.model);
  const auto n_ctrl = static_cast<Index>(sys.controls().size());
  const auto& spec = cfg.trajectory;
  const auto& oc = cfg.optimizer;

  std::optional<Schedule> schedule;
  switch (spec.schedule) {
    case TrajectorySchedule::Zero:
      schedule = Schedule::zero(*spec.total_time, oc.intervals, n_ctrl, oc.amplitude_cap);
      break;
    case TrajectorySchedule::Explicit:
      if (spec.amplitudes->cols() != n_ctrl) {
        throw ConfigError("trajectory.amplitudes: model has " + std::to_string(n_ctrl) + " control(s)");
      }
      try {
        schedule = Schedule(*spec.total_time, *spec.amplitudes, oc.amplitude_cap);
      } catch (const ScheduleError& e) {
        throw ConfigError(std::string("trajectory.amplitudes: ") + e.what());
      }
      break;
    case TrajectorySchedule::Optimized: {
      OptimizerConfig seeded = oc;
      seeded.seed = point_seed(cfg.master_seed, 0);
      auto res = find_min_time(sys, seeded, cfg.upper_bracket);
      schedule = spec.total_time ? res.schedule.with_total_time(*spec.total_time) : res.schedule;
      break;
    }
  }

  const auto states = propagate(sys, *schedule, spec.samples);
  const bool qubit = sys.dim() == 2;
  std::ostringstream out;
  out << 't';
  if (qubit) {
    out << ",sx,sy,sz";
  } else {
    for (Index a = 0; a < sys.dim(); ++a) out << ",p_" << a;
  }
  out << ",trace_distance\n";
  const ComplexMatrix sx = ops::sigma_x(), sy = ops::sigma_y(), sz = ops::sigma_z();
  for (std::size_t k = 0; k < states.size(); ++k) {
    const double t = schedule->total_time() * static_cast<double>(k) / static_cast<double>(spec.samples);
    const ComplexMatrix& rho = states[k].matrix();
    out << format_double(t);
    if (qubit) {
      out << ',' << format_double((rho * sx).trace().real()) << ',' << format_double((rho * sy).trace().real())
          << ',' << format_double((rho * sz).trace().real());
    } else {
      for (Index a = 0; a < sys.dim(); ++a) out << ',' << format_double(rho(a, a).real());
    }
    out << ',' << format_double(trace_distance(states[k], sys.target())) << '\n';
  }
  return out.str();
}

ClosedCompareResult closed_compare(std::uint64_t seed, int instances_per_dim, const std::vector<Index>& dims) {
  ClosedCompareResult result;
  std::ostringstream out;
  out << "instance,d,trace_norm_distance,bures,variance,spread,reference_bound,open_bound,"
         "reference_divergent,chain_holds,popoviciu_holds,comparison_holds\n";
  random::Engine rng(seed);
  for (Index d : dims) {
    for (int i = 0; i < instances_per_dim; ++i) {
      const ComplexVector psi0 = random::ket(d, rng);
      const ComplexVector psi_t = random::ket(d, rng);
      const ComplexMatrix h0 = random::hermitian(d, rng);
      const ClosedSystemReport r = closed_system_report(psi0, psi_t, h0);
      const bool ok = r.chain_holds && r.popoviciu_holds && r.comparison_holds;
      if (!ok) ++result.failures;
      out << result.instances << ',' << d << ',' << format_double(r.trace_norm_distance) << ','
          << format_double(r.bures) << ',' << format_double(r.variance) << ',' << format_double(r.spread) << ','
          << format_double(r.reference_bound) << ',' << format_double(r.open_bound) << ','
          << int(r.reference_divergent) << ',' << int(r.chain_holds) << ',' << int(r.popoviciu_holds) << ','
          << int(r.comparison_holds) << '\n';
      ++result.instances;
    }
  }
  result.csv = out.str();
  return result;
}

}  // namespace qslab::experiment
