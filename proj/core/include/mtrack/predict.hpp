#pragma once

#include "mtrack/bernstein.hpp"

#include <span>

namespace mtrack {

struct MovingObjectState {
  Vec2 position;
  Vec2 velocity;
  double radius;
};

struct TimedPosition {
  double time;
  Vec2 position;
};

/// Bernstein form of x(t) = position + velocity * t on [0, horizon],
/// degree-elevated to `degree` (exact, not fitted).
PlanarCurve predict_constant_velocity(const MovingObjectState& state, double horizon,
                                      int degree = 3);

struct VelocityEstimate {
  Vec2 velocity;
  bool reliable;  // false when fewer than two distinct-time samples were given
};

/// Least-squares slope of position over the last `window` samples.
VelocityEstimate estimate_velocity(std::span<const TimedPosition> history, int window);

}  // namespace mtrack
