#include "mtrack/predict.hpp"

namespace mtrack {

PlanarCurve predict_constant_velocity(const MovingObjectState& state, double horizon, int degree) {
  if (degree < 1) throw std::invalid_argument("predict_constant_velocity: degree must be >= 1");
  const PlanarCurve affine({state.position, state.position + horizon * state.velocity}, horizon);
  return affine.elevated(degree);
}

VelocityEstimate estimate_velocity(std::span<const TimedPosition> history, int window) {
  const int n = static_cast<int>(history.size());
  const int use = std::min(n, std::max(window, 2));
  const auto tail = history.subspan(n - std::min(n, use));
  // Need two distinct times for a slope.
  bool distinct = false;
  for (std::size_t i = 1; i < tail.size(); ++i) {
    if (tail[i].time != tail[0].time) {
      distinct = true;
      break;
    }
  }
  if (tail.size() < 2 || !distinct) return {Vec2::Zero(), false};

  double st = 0.0;
  Vec2 sp = Vec2::Zero();
  for (const auto& s : tail) {
    st += s.time;
    sp += s.position;
  }
  const double m = static_cast<double>(tail.size());
  const double tbar = st / m;
  const Vec2 pbar = sp / m;
  double stt = 0.0;
  Vec2 stp = Vec2::Zero();
  for (const auto& s : tail) {
    const double dt = s.time - tbar;
    stt += dt * dt;
    stp += dt * (s.position - pbar);
  }
  return {stp / stt, true};
}

}  // namespace mtrack
