#include "qslab/schedule.hpp"

#include <cmath>

namespace qslab {

Schedule::Schedule(double total_time, RealMatrix amplitudes, double amplitude_cap)
    : total_time_(total_time), amplitudes_(std::move(amplitudes)), amplitude_cap_(amplitude_cap) {
  // T = 0 is admitted as the degenerate "no evolution" schedule.
  if (!std::isfinite(total_time_) || total_time_ < 0.0) {
    throw ScheduleError("schedule: total time must be finite and non-negative");
  }
  if (amplitudes_.rows() < 1) {
    throw ScheduleError("schedule: at least one interval is required");
  }
  if (!(amplitude_cap_ > 0.0) || !std::isfinite(amplitude_cap_)) {
    throw ScheduleError("schedule: amplitude cap must be positive and finite");
  }
  if (!amplitudes_.allFinite()) {
    throw ScheduleError("schedule: amplitudes must be finite");
  }
  if (amplitudes_.size() > 0 && amplitudes_.cwiseAbs().maxCoeff() > amplitude_cap_) {
    throw ScheduleError("schedule: amplitude exceeds cap");
  }
}

Schedule Schedule::zero(double total_time, Index intervals, Index controls, double amplitude_cap) {
  return Schedule(total_time, RealMatrix::Zero(intervals, controls), amplitude_cap);
}

Schedule Schedule::constant(double total_time, Index intervals, const RealVector& values,
                            double amplitude_cap) {
  RealMatrix amps(intervals, values.size());
  for (Index j = 0; j < intervals; ++j) amps.row(j) = values.transpose();
  return Schedule(total_time, std::move(amps), amplitude_cap);
}

Schedule Schedule::slice(Index first, Index count) const {
  if (first < 0 || count < 1 || first + count > intervals()) {
    throw ScheduleError("schedule: slice out of range");
  }
  return Schedule(interval_length() * static_cast<double>(count),
                  amplitudes_.middleRows(first, count), amplitude_cap_);
}

Schedule Schedule::with_total_time(double total_time) const {
  return Schedule(total_time, amplitudes_, amplitude_cap_);
}

}  // namespace qslab
