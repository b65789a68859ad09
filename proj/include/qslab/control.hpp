#pragma once

// Piecewise-constant control optimization and minimal-time search.
//
// The cost of a schedule is the trace distance (1/2)||rho(T) - rho_T||_1.
// Schedules are optimized by a projected BFGS method on the box
// |f| <= amplitude_cap with central finite-difference gradients, from
// several starts. The minimal time is located by bisection between the
// certified lower bound and the uncontrolled first-passage time.

#include "qslab/lindblad.hpp"
#include "qslab/liouvillian.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace qslab {

class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Uncontrolled dynamics did not reach the target distance within the horizon.
class DoesNotRelaxError : public NumericalFailure {
 public:
  explicit DoesNotRelaxError(const std::string& what) : NumericalFailure(what) {}
};

/// The upper end of the time bracket is not feasible.
class InfeasibleBracketError : public NumericalFailure {
 public:
  explicit InfeasibleBracketError(const std::string& what) : NumericalFailure(what) {}
};

struct OptimizerConfig {
  double target_distance = 0.1;
  int restarts = 8;
  int max_iterations = 100;
  double fd_step = 1e-6;  // scaled by max(1, |amplitude|)
  std::uint64_t seed = 0;
  Index intervals = 20;
  double amplitude_cap = 20.0;
  double bracket_relative_width = 1e-2;
  double gradient_tolerance = 1e-9;
  /// Stop a restart (and the restart loop) once the target distance is met.
  bool stop_at_target = true;
  /// Seed each bisection step with the best feasible schedule found so far.
  bool warm_start = true;
  /// First-passage search: grid points per 1/sigma_max and time horizon.
  double grid_points_per_unit = 1000.0;
  double horizon = 1e8;
  long long first_passage_max_steps = 2000000;

  void validate() const;
};

/// Trace distance to the target after `schedule`.
double evaluate_cost(const ControlSystem& sys, const Schedule& schedule);

/// Cost as a function of the amplitude vector for a fixed total time and
/// interval count. Amplitudes are flattened column-major from the
/// intervals x controls matrix. Gradients reuse the per-interval propagators
/// of the base pass so that each perturbed coordinate costs one matrix
/// exponential plus matrix-vector products.
class ScheduleObjective {
 public:
  ScheduleObjective(const ControlSystem& sys, double total_time, Index intervals);

  [[nodiscard]] Index size() const { return intervals_ * controls_; }
  [[nodiscard]] Index intervals() const { return intervals_; }
  [[nodiscard]] Index controls() const { return controls_; }

  [[nodiscard]] double value(const RealVector& x) const;
  double value_and_gradient(const RealVector& x, double fd_step, RealVector& gradient) const;

 private:
  [[nodiscard]] double distance(const RealVector& r) const;
  [[nodiscard]] RealMatrix step(const RealVector& x, Index j, Index perturbed, double delta) const;

  RealLiouvillian liouvillian_;
  RealVector r0_;
  ComplexMatrix target_;
  double dt_;
  Index intervals_;
  Index controls_;
};

struct OptimizeResult {
  Schedule schedule;
  double cost = 0.0;
  int restarts_used = 0;
  std::vector<double> restart_costs;
};

/// Multi-start projected BFGS. Start 0 is the zero schedule, start 1 a
/// linear down-ramp from the cap, any `extra_starts` follow, and the rest are
/// uniform random in [-cap, cap] seeded from cfg.seed. Returns the best.
OptimizeResult optimize_schedule(const ControlSystem& sys, double total_time,
                                 const OptimizerConfig& cfg,
                                 const std::vector<RealMatrix>& extra_starts = {});

/// Earliest time at which the uncontrolled evolution comes within `delta` of
/// the target. Steps never skip a crossing: the trace distance changes at
/// most at rate ||L(rho(s))||_1 / 2 after any time s, so steps shorter than
/// the remaining gap over that rate are safe; the smallest step is
/// 1 / (grid_points_per_unit * sigma_max). The crossing is refined by
/// bisection to 1e-10 absolute. Throws DoesNotRelaxError past cfg.horizon.
double uncontrolled_first_passage(const ControlSystem& sys, double delta,
                                  const OptimizerConfig& cfg = {});

struct BracketStep {
  double lower = 0.0;
  double upper = 0.0;
  double probe = 0.0;
  double cost = 0.0;
  bool feasible = false;
  std::uint64_t seed = 0;
};

struct TimeSearchResult {
  double t_min = 0.0;
  Schedule schedule;
  double achieved_distance = 0.0;
  double t_uncontrolled = 0.0;
  double lower_bound = 0.0;
  int restarts_used = 0;
  std::uint64_t seed = 0;
  std::vector<BracketStep> history;
};

/// Bisection for the shortest feasible time. Feasibility of a probe time is
/// "some restart reaches the target distance". Throws InfeasibleBracketError
/// if the upper bracket cannot be verified and NumericalFailure if the
/// returned schedule fails re-evaluation.
TimeSearchResult find_min_time(const ControlSystem& sys, const OptimizerConfig& cfg,
                               std::optional<double> upper_bracket = std::nullopt);

}  // namespace qslab
