#include "qslab/schedule.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace qslab;

TEST(Schedule, ZeroScheduleShape) {
  const Schedule s = Schedule::zero(2.0, 20, 1, 20.0);
  EXPECT_EQ(s.intervals(), 20);
  EXPECT_EQ(s.controls(), 1);
  EXPECT_DOUBLE_EQ(s.interval_length(), 0.1);
  EXPECT_EQ(s.amplitudes().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Schedule, ConstantFillsEveryInterval) {
  RealVector v(2);
  v << 1.5, -2.0;
  const Schedule s = Schedule::constant(1.0, 4, v, 3.0);
  for (Index j = 0; j < 4; ++j) {
    EXPECT_EQ(s.amplitude(j, 0), 1.5);
    EXPECT_EQ(s.amplitude(j, 1), -2.0);
  }
}

TEST(Schedule, RejectsInvalidInput) {
  RealMatrix a = RealMatrix::Constant(3, 1, 2.0);
  EXPECT_THROW(Schedule(-1.0, a, 5.0), ScheduleError);
  EXPECT_THROW(Schedule(1.0, RealMatrix(0, 1), 5.0), ScheduleError);
  EXPECT_THROW(Schedule(1.0, a, 0.0), ScheduleError);
  EXPECT_THROW(Schedule(1.0, a, 1.0), ScheduleError);  // exceeds cap
  a(1, 0) = std::nan("");
  EXPECT_THROW(Schedule(1.0, a, 5.0), ScheduleError);
  EXPECT_THROW(Schedule(INFINITY, RealMatrix::Zero(1, 1), 5.0), ScheduleError);
}

TEST(Schedule, AmplitudeAtCapIsAllowed) {
  EXPECT_NO_THROW(Schedule(1.0, RealMatrix::Constant(2, 1, -5.0), 5.0));
}

TEST(Schedule, SliceKeepsIntervalLength) {
  RealMatrix a(4, 1);
  a << 1, 2, 3, 4;
  const Schedule s(2.0, a, 10.0);
  const Schedule tail = s.slice(1, 3);
  EXPECT_EQ(tail.intervals(), 3);
  EXPECT_DOUBLE_EQ(tail.total_time(), 1.5);
  EXPECT_DOUBLE_EQ(tail.interval_length(), s.interval_length());
  EXPECT_EQ(tail.amplitude(0, 0), 2.0);
  EXPECT_THROW(s.slice(3, 2), ScheduleError);
}

TEST(Schedule, StretchedTotalTime) {
  const Schedule s = Schedule::zero(1.0, 5, 2, 1.0).with_total_time(3.0);
  EXPECT_DOUBLE_EQ(s.total_time(), 3.0);
  EXPECT_EQ(s.intervals(), 5);
}
