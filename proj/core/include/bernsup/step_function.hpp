#pragma once

#include <span>
#include <vector>

#include "bernsup/common.hpp"

namespace bernsup {

struct Breakpoint {
  double t = 0.0;
  double v = 0.0;
};

/// Nondecreasing, nonnegative, right-continuous piecewise-constant function on
/// [0, 1]. The first breakpoint is pinned at time 0 so the start value is
/// explicit; evaluation at t returns the value of the last breakpoint with
/// time <= t.
class StepFunction {
 public:
  /// Validates and builds. Throws Error with one of: MissingTimeZero,
  /// UnsortedTimes, TimeOutOfRange, NegativeValue, NonMonotoneValues.
  static StepFunction make(std::vector<Breakpoint> points);

  double operator()(double t) const;  // throws TimeOutOfRange for t outside [0,1]

  double start() const { return pts_.front().v; }
  double terminal() const { return pts_.back().v; }
  std::span<const Breakpoint> breakpoints() const { return pts_; }
  size_t size() const { return pts_.size(); }

  bool dyadic_values() const;

 private:
  StepFunction() = default;
  std::vector<Breakpoint> pts_;
};

StepFunction make_step(std::vector<Breakpoint> points);

}  // namespace bernsup
