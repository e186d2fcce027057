#pragma once

#include "mtrack/bernstein.hpp"

#include <vector>

namespace mtrack {

/// Half-space whose boundary translates with an anchor trajectory (the
/// target prediction). Membership at time t:
///   normal . (x(t) - anchor(t) + anchor_shift) + static_offset <= 0.
struct MovingHalfSpace {
  Vec2 normal;
  double static_offset;
  PlanarCurve anchor;
  Vec2 anchor_shift;

  double membership_value(const Vec2& x, double t) const {
    return normal.dot(x - anchor.evaluate(t) + anchor_shift) + static_offset;
  }
};

/// Scalar certificate polynomial g(t) = -(membership expression). The
/// trajectory satisfies the constraint for all t if every coefficient of g
/// is nonnegative; a negative coefficient only rejects.
ScalarCurve membership_polynomial(const MovingHalfSpace& hs, const PlanarCurve& traj);

/// Inter-agent collision half-space for `self` against `other`: the buffered
/// Voronoi boundary between the two current positions, translating with the
/// target prediction. Mutual membership keeps centers >= 2 * agent_radius
/// apart. Throws std::invalid_argument on coincident agents.
MovingHalfSpace build_dbvc(const Vec2& self_position, const Vec2& other_position,
                           const PlanarCurve& target_prediction, double agent_radius);

enum class DivcCase { obtuse, acute, fallback };

enum class AlphaPolicy { midpoint, min_alpha, max_alpha };

/// Inter-visibility cell for one agent of a pair: two translating half-spaces
/// that keep the agent at least agent_radius away from the partner's
/// line-of-sight to the target (and vice versa when the partner holds its own
/// cell). `fallback` marks geometries with an empty parameter range
/// (e.g. collinear lines of sight); callers must then treat the partner as a
/// dynamic occluder instead.
struct DivcPair {
  DivcCase case_tag;
  double alpha;                       // valid for obtuse/acute only
  std::vector<MovingHalfSpace> halves;  // two entries, empty for fallback
};

/// Upper end of the valid scale range for the obtuse construction.
double obtuse_alpha_upper(const Vec2& xcq_i, const Vec2& xcq_j, double agent_radius);
/// Upper end of the valid scale range for the acute construction.
double acute_alpha_upper(const Vec2& xcq_i, const Vec2& xcq_j, double agent_radius);

/// Build the inter-visibility cell for `self` against `other`. Case selection:
/// obtuse branch when the lines of sight meet at >= 90 degrees. Throws
/// std::invalid_argument when the target coincides with an agent.
DivcPair build_divc(const Vec2& self_position, const Vec2& other_position,
                    const PlanarCurve& target_prediction, double agent_radius,
                    AlphaPolicy policy = AlphaPolicy::midpoint);

}  // namespace mtrack
