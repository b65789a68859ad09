#include "qslab/control.hpp"

#include "qslab/bounds.hpp"
#include "qslab/norms.hpp"
#include "qslab/seeding.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

namespace qslab {

void OptimizerConfig::validate() const {
  if (!(target_distance > 0.0 && target_distance < 1.0)) {
    throw PreconditionError("optimizer: target_distance must lie in (0, 1)");
  }
  if (restarts < 1 || max_iterations < 1 || intervals < 1) {
    throw PreconditionError("optimizer: restarts, max_iterations and intervals must be positive");
  }
  if (!(fd_step > 0.0) || !(amplitude_cap > 0.0) || !(bracket_relative_width > 0.0) ||
      !(grid_points_per_unit > 0.0) || !(horizon > 0.0) || !(gradient_tolerance >= 0.0) ||
      first_passage_max_steps < 1) {
    throw PreconditionError("optimizer: step sizes, cap, widths and horizon must be positive");
  }
}

double evaluate_cost(const ControlSystem& sys, const Schedule& schedule) {
  const auto states = propagate(sys.generator(), sys.controls(), sys.initial().matrix(), schedule, 1);
  return trace_distance(states.back(), sys.target().matrix());
}

ScheduleObjective::ScheduleObjective(const ControlSystem& sys, double total_time, Index intervals)
    : liouvillian_(sys.generator(), sys.controls()),
      r0_(liouvillian_.basis().coordinates(sys.initial().matrix())),
      target_(sys.target().matrix()),
      dt_(total_time / static_cast<double>(intervals)),
      intervals_(intervals),
      controls_(static_cast<Index>(sys.controls().size())) {
  if (intervals < 1) throw ScheduleError("ScheduleObjective: at least one interval is required");
  if (!(total_time >= 0.0)) throw ScheduleError("ScheduleObjective: negative total time");
}

double ScheduleObjective::distance(const RealVector& r) const {
  const ComplexMatrix diff = liouvillian_.basis().to_operator(r) - target_;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(diff, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

RealMatrix ScheduleObjective::step(const RealVector& x, Index j, Index perturbed, double delta) const {
  std::vector<double> amps(static_cast<std::size_t>(controls_));
  for (Index c = 0; c < controls_; ++c) amps[static_cast<std::size_t>(c)] = x(c * intervals_ + j);
  if (perturbed >= 0) amps[static_cast<std::size_t>(perturbed)] += delta;
  return liouvillian_.step(amps, dt_);
}

double ScheduleObjective::value(const RealVector& x) const {
  if (x.size() != size()) throw DimensionError("ScheduleObjective: amplitude vector size");
  RealVector r = r0_;
  for (Index j = 0; j < intervals_; ++j) r = step(x, j, -1, 0.0) * r;
  return distance(r);
}

double ScheduleObjective::value_and_gradient(const RealVector& x, double fd_step,
                                             RealVector& gradient) const {
  if (x.size() != size()) throw DimensionError("ScheduleObjective: amplitude vector size");
  std::vector<RealMatrix> props(static_cast<std::size_t>(intervals_));
  std::vector<RealVector> states(static_cast<std::size_t>(intervals_ + 1));
  states[0] = r0_;
  for (Index j = 0; j < intervals_; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    props[ju] = step(x, j, -1, 0.0);
    states[ju + 1] = props[ju] * states[ju];
  }
  const double f = distance(states.back());

  gradient.resize(size());
  for (Index j = 0; j < intervals_; ++j) {
    for (Index c = 0; c < controls_; ++c) {
      const Index idx = c * intervals_ + j;
      const double h = fd_step * std::max(1.0, std::abs(x(idx)));
      double sides[2];
      for (int s = 0; s < 2; ++s) {
        RealVector r = step(x, j, c, s == 0 ? h : -h) * states[static_cast<std::size_t>(j)];
        for (Index k = j + 1; k < intervals_; ++k) r = props[static_cast<std::size_t>(k)] * r;
        sides[s] = distance(r);
      }
      gradient(idx) = (sides[0] - sides[1]) / (2.0 * h);
    }
  }
  return f;
}

namespace {

struct MinimizeResult {
  RealVector x;
  double f = 0.0;
};

// Projected BFGS on the box [-cap, cap]^n: bound-active coordinates whose
// gradient points outward are frozen, the quasi-Newton direction is taken in
// the remaining coordinates, and an Armijo backtracking search runs along the
// projected path.
MinimizeResult projected_bfgs(const ScheduleObjective& obj, RealVector x, const OptimizerConfig& cfg) {
  const Index n = x.size();
  const double cap = cfg.amplitude_cap;
  const double edge = 1e-12 * cap;
  auto project = [cap](RealVector v) { return RealVector(v.cwiseMax(-cap).cwiseMin(cap)); };

  x = project(std::move(x));
  RealVector g;
  double f = obj.value_and_gradient(x, cfg.fd_step, g);
  RealMatrix h_inv = RealMatrix::Identity(n, n);
  bool fresh = true;
  int stalls = 0;

  for (int it = 0; it < cfg.max_iterations; ++it) {
    if (cfg.stop_at_target && f <= cfg.target_distance) break;

    std::vector<bool> active(static_cast<std::size_t>(n), false);
    RealVector pg = g;
    for (Index i = 0; i < n; ++i) {
      if ((x(i) >= cap - edge && g(i) < 0.0) || (x(i) <= -cap + edge && g(i) > 0.0)) {
        active[static_cast<std::size_t>(i)] = true;
        pg(i) = 0.0;
      }
    }
    if (pg.cwiseAbs().maxCoeff() <= cfg.gradient_tolerance) break;

    RealVector p = -(h_inv * pg);
    for (Index i = 0; i < n; ++i) {
      if (active[static_cast<std::size_t>(i)]) p(i) = 0.0;
    }
    if (p.dot(pg) >= 0.0) {
      h_inv.setIdentity();
      fresh = true;
      p = -pg;
    }
    double alpha = 1.0;
    if (fresh) alpha = std::min(1.0, 0.25 * cap / p.cwiseAbs().maxCoeff());

    bool accepted = false;
    RealVector x_new;
    double f_new = f;
    for (int ls = 0; ls < 40; ++ls) {
      x_new = project(x + alpha * p);
      f_new = obj.value(x_new);
      if (f_new <= f + 1e-4 * g.dot(x_new - x)) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      if (fresh) break;
      h_inv.setIdentity();
      fresh = true;
      continue;
    }

    RealVector g_new;
    f_new = obj.value_and_gradient(x_new, cfg.fd_step, g_new);
    const RealVector s = x_new - x;
    const RealVector y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (fresh) {
        h_inv = (sy / y.squaredNorm()) * RealMatrix::Identity(n, n);
        fresh = false;
      }
      const double rho = 1.0 / sy;
      const RealVector hy = h_inv * y;
      // H+ = (I - rho s y^T) H (I - rho y s^T) + rho s s^T, expanded.
      h_inv += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) -
               rho * (hy * s.transpose() + s * hy.transpose());
    }

    stalls = (f - f_new <= 1e-12 * std::max(1.0, f)) ? stalls + 1 : 0;
    x = std::move(x_new);
    f = f_new;
    g = std::move(g_new);
    if (stalls >= 5) break;
  }
  return {std::move(x), f};
}

RealVector flatten(const RealMatrix& amps) { return Eigen::Map<const RealVector>(amps.data(), amps.size()); }

RealMatrix unflatten(const RealVector& x, Index intervals, Index controls) {
  return Eigen::Map<const RealMatrix>(x.data(), intervals, controls);
}

}  // namespace

OptimizeResult optimize_schedule(const ControlSystem& sys, double total_time,
                                 const OptimizerConfig& cfg,
                                 const std::vector<RealMatrix>& extra_starts) {
  cfg.validate();
  if (!(total_time > 0.0)) throw ScheduleError("optimize_schedule: total time must be positive");
  const Index n = cfg.intervals;
  const auto n_ctrl = static_cast<Index>(sys.controls().size());
  const double cap = cfg.amplitude_cap;
  const ScheduleObjective objective(sys, total_time, n);

  std::vector<RealMatrix> starts;
  starts.push_back(RealMatrix::Zero(n, n_ctrl));
  RealMatrix ramp(n, n_ctrl);
  for (Index j = 0; j < n; ++j) ramp.row(j).setConstant(cap * (1.0 - static_cast<double>(j) / static_cast<double>(n)));
  starts.push_back(ramp);
  for (const auto& s : extra_starts) {
    if (s.rows() != n || s.cols() != n_ctrl) throw DimensionError("optimize_schedule: extra start shape");
    starts.push_back(s.cwiseMax(-cap).cwiseMin(cap));
  }

  OptimizeResult best{Schedule::zero(total_time, n, n_ctrl, cap), 0.0, 0, {}};
  double best_cost = std::numeric_limits<double>::infinity();
  RealVector best_x;
  for (int k = 0; k < cfg.restarts; ++k) {
    RealMatrix start;
    if (static_cast<std::size_t>(k) < starts.size()) {
      start = starts[static_cast<std::size_t>(k)];
    } else {
      std::mt19937_64 rng(derive_seed(cfg.seed, {static_cast<std::uint64_t>(k)}));
      std::uniform_real_distribution<double> uniform(-cap, cap);
      start.resize(n, n_ctrl);
      for (Index c = 0; c < n_ctrl; ++c) {
        for (Index j = 0; j < n; ++j) start(j, c) = uniform(rng);
      }
    }
    const auto result = projected_bfgs(objective, flatten(start), cfg);
    best.restart_costs.push_back(result.f);
    best.restarts_used = k + 1;
    if (result.f < best_cost) {
      best_cost = result.f;
      best_x = result.x;
    }
    if (cfg.stop_at_target && best_cost <= cfg.target_distance) break;
  }
  best.schedule = Schedule(total_time, unflatten(best_x, n, n_ctrl), cap);
  best.cost = best_cost;
  return best;
}

double uncontrolled_first_passage(const ControlSystem& sys, double delta, const OptimizerConfig& cfg) {
  if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("uncontrolled_first_passage: delta must lie in (0, 1)");
  const RealLiouvillian liouvillian(sys.generator(), {});
  const HermitianBasis& basis = liouvillian.basis();
  const ComplexMatrix& target = sys.target().matrix();
  auto distance = [&](const RealVector& r) { return trace_distance(basis.to_operator(r), target); };

  RealVector r = basis.coordinates(sys.initial().matrix());
  double dist = distance(r);
  if (dist <= delta) return 0.0;

  const double sigma_max = induced_22(build_superoperator(sys.generator())).value;
  if (!(sigma_max > 0.0)) {
    throw DoesNotRelaxError("uncontrolled_first_passage: generator is zero, the state never moves");
  }
  const double h_min = 1.0 / (cfg.grid_points_per_unit * sigma_max);
  const RealMatrix& gen = liouvillian.drift();

  // ladder[k] = exp(2^k h_min L)
  std::vector<RealMatrix> ladder;
  auto rung = [&](std::size_t k) -> const RealMatrix& {
    while (ladder.size() <= k) {
      ladder.push_back(matrix_exp(RealMatrix(std::ldexp(h_min, static_cast<int>(ladder.size())) * gen)));
    }
    return ladder[k];
  };

  const auto max_units = static_cast<std::int64_t>(std::ceil(cfg.horizon / h_min));
  std::int64_t units = 0;
  for (long long steps = 0;; ++steps) {
    if (steps >= cfg.first_passage_max_steps) {
      throw DoesNotRelaxError("uncontrolled_first_passage: no crossing of trace distance " + std::to_string(delta) +
                              " within " + std::to_string(steps) + " steps (t = " +
                              std::to_string(h_min * static_cast<double>(units)) + ")");
    }
    // |dD/dt| <= ||L(rho(t))||_1 / 2, and the trace norm of L(rho(t)) cannot
    // grow under the contractive semigroup, so the current value bounds the
    // rate for all later times.
    const double rate = 0.5 * trace_norm(basis.to_operator(gen * r));
    if (rate <= 1e-300) {
      throw DoesNotRelaxError("uncontrolled_first_passage: stationary at trace distance " +
                              std::to_string(dist) + " > " + std::to_string(delta));
    }
    const double safe = (dist - delta) / rate;
    std::size_t k = 0;
    while (std::ldexp(h_min, static_cast<int>(k + 1)) <= safe && k < 60) ++k;
    const std::int64_t stride = std::int64_t{1} << k;
    if (units + stride > max_units) {
      throw DoesNotRelaxError("uncontrolled_first_passage: no crossing of trace distance " +
                              std::to_string(delta) + " within horizon " + std::to_string(cfg.horizon));
    }
    const RealVector r_next = rung(k) * r;
    const double dist_next = distance(r_next);
    if (dist_next <= delta) {
      // Crossing inside (a, b]; refine from the state at a.
      const double t_a = h_min * static_cast<double>(units);
      double lo = 0.0;
      double hi = h_min * static_cast<double>(stride);
      while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        const RealVector r_mid = matrix_exp(RealMatrix(mid * gen)) * r;
        if (distance(r_mid) <= delta) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      return t_a + hi;
    }
    r = r_next;
    dist = dist_next;
    units += stride;
  }
}

TimeSearchResult find_min_time(const ControlSystem& sys, const OptimizerConfig& cfg,
                               std::optional<double> upper_bracket) {
  cfg.validate();
  const Index n = cfg.intervals;
  const auto n_ctrl = static_cast<Index>(sys.controls().size());
  const double delta = cfg.target_distance;

  TimeSearchResult out{0.0, Schedule::zero(0.0, n, n_ctrl, cfg.amplitude_cap), 0.0, 0.0, 0.0, 0, cfg.seed, {}};
  out.lower_bound = bound_schedule_independent(sys, NormKind::SqrtDInduced22).bound;

  double hi = 0.0;
  Schedule best = Schedule::zero(0.0, n, n_ctrl, cfg.amplitude_cap);
  if (upper_bracket) {
    hi = *upper_bracket;
    if (!(hi > 0.0)) throw InfeasibleBracketError("find_min_time: upper bracket must be positive");
    OptimizerConfig probe_cfg = cfg;
    probe_cfg.seed = derive_seed(cfg.seed, {0xB0B0ULL});
    const auto res = optimize_schedule(sys, hi, probe_cfg);
    out.restarts_used += res.restarts_used;
    if (res.cost > delta) {
      throw InfeasibleBracketError("find_min_time: best cost " + std::to_string(res.cost) +
                                   " at the supplied upper bracket T = " + std::to_string(hi) +
                                   " exceeds the target distance " + std::to_string(delta));
    }
    best = res.schedule;
    try {
      out.t_uncontrolled = uncontrolled_first_passage(sys, delta, cfg);
    } catch (const DoesNotRelaxError&) {
      out.t_uncontrolled = std::numeric_limits<double>::infinity();
    }
  } else {
    out.t_uncontrolled = uncontrolled_first_passage(sys, delta, cfg);
    hi = out.t_uncontrolled;
    // The zero schedule is admissible; nudge past rounding at the crossing.
    bool ok = false;
    for (int bump = 0; bump < 8 && !ok; ++bump) {
      best = Schedule::zero(hi, n, n_ctrl, cfg.amplitude_cap);
      ok = hi == 0.0 || evaluate_cost(sys, best) <= delta;
      if (!ok) hi += 1e-9 * std::max(1.0, hi);
    }
    if (!ok) {
      throw InfeasibleBracketError("find_min_time: zero control does not reach the target at the "
                                   "uncontrolled first-passage time " + std::to_string(hi));
    }
  }

  double lo = std::min(out.lower_bound, hi);
  std::uint64_t step = 0;
  while (hi - lo > cfg.bracket_relative_width * hi) {
    const double mid = 0.5 * (lo + hi);
    OptimizerConfig step_cfg = cfg;
    step_cfg.seed = derive_seed(cfg.seed, {step});
    std::vector<RealMatrix> extra;
    if (cfg.warm_start && best.total_time() > 0.0) extra.push_back(best.amplitudes());
    const auto res = optimize_schedule(sys, mid, step_cfg, extra);
    out.restarts_used += res.restarts_used;
    const bool feasible = res.cost <= delta;
    out.history.push_back({lo, hi, mid, res.cost, feasible, step_cfg.seed});
    if (feasible) {
      hi = mid;
      best = res.schedule;
    } else {
      lo = mid;
    }
    ++step;
  }

  out.t_min = hi;
  out.schedule = best;
  out.achieved_distance = hi == 0.0 ? trace_distance(sys.initial(), sys.target()) : evaluate_cost(sys, best);
  if (out.achieved_distance > delta) {
    throw NumericalFailure("find_min_time: returned schedule re-evaluates to distance " +
                           std::to_string(out.achieved_distance) + " > " + std::to_string(delta));
  }
  return out;
}

}  // namespace qslab
