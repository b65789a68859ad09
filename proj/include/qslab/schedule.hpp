#pragma once

#include "qslab/numerics.hpp"

namespace qslab {

class ScheduleError : public std::invalid_argument {
 public:
  explicit ScheduleError(const std::string& what) : std::invalid_argument(what) {}
};

/// Piecewise-constant control amplitudes on equal-length intervals of [0, T].
/// Row j of `amplitudes()` holds the amplitude of every control on interval j.
class Schedule {
 public:
  Schedule(double total_time, RealMatrix amplitudes, double amplitude_cap);

  static Schedule zero(double total_time, Index intervals, Index controls, double amplitude_cap);
  static Schedule constant(double total_time, Index intervals, const RealVector& values,
                           double amplitude_cap);

  [[nodiscard]] double total_time() const { return total_time_; }
  [[nodiscard]] Index intervals() const { return amplitudes_.rows(); }
  [[nodiscard]] Index controls() const { return amplitudes_.cols(); }
  [[nodiscard]] double interval_length() const {
    return total_time_ / static_cast<double>(intervals());
  }
  [[nodiscard]] double amplitude_cap() const { return amplitude_cap_; }
  [[nodiscard]] const RealMatrix& amplitudes() const { return amplitudes_; }
  [[nodiscard]] double amplitude(Index interval, Index control) const {
    return amplitudes_(interval, control);
  }

  /// Intervals [first, first + count) as a schedule of their own duration.
  [[nodiscard]] Schedule slice(Index first, Index count) const;

  /// Same amplitudes stretched over a different total time.
  [[nodiscard]] Schedule with_total_time(double total_time) const;

 private:
  double total_time_;
  RealMatrix amplitudes_;
  double amplitude_cap_;
};

}  // namespace qslab
