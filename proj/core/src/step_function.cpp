#include "bernsup/step_function.hpp"

#include <algorithm>

namespace bernsup {

StepFunction StepFunction::make(std::vector<Breakpoint> points) {
  if (points.empty() || points.front().t != 0.0)
    fail(Errc::MissingTimeZero, "first breakpoint must be at time 0");
  for (size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!(p.t >= 0.0 && p.t <= 1.0))
      fail(Errc::TimeOutOfRange, "breakpoint time outside [0,1]");
    if (i > 0 && !(points[i - 1].t < p.t))
      fail(Errc::UnsortedTimes, "breakpoint times must be strictly increasing");
    if (!(p.v >= 0.0)) fail(Errc::NegativeValue, "breakpoint value must be nonnegative");
    if (i > 0 && p.v < points[i - 1].v)
      fail(Errc::NonMonotoneValues, "breakpoint values must be nondecreasing");
  }
  StepFunction f;
  f.pts_ = std::move(points);
  return f;
}

double StepFunction::operator()(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) fail(Errc::TimeOutOfRange, "evaluation time outside [0,1]");
  // last breakpoint with time <= t
  auto it = std::upper_bound(pts_.begin(), pts_.end(), t,
                             [](double x, const Breakpoint& b) { return x < b.t; });
  return std::prev(it)->v;
}

bool StepFunction::dyadic_values() const {
  return std::all_of(pts_.begin(), pts_.end(), [](const Breakpoint& b) { return is_dyadic(b.v); });
}

StepFunction make_step(std::vector<Breakpoint> points) { return StepFunction::make(std::move(points)); }

}  // namespace bernsup
