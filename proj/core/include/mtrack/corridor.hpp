#pragma once

#include "mtrack/bernstein.hpp"
#include "mtrack/geom.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mtrack {

struct CorridorSegment {
  double t_begin;
  double t_end;
  ConvexPolygon region;
};

/// Time-indexed convex regions that are simultaneously free of static
/// obstacles and contain the target's predicted positions over each window,
/// so any contained point has a free line of sight to the target.
struct Corridor {
  std::vector<CorridorSegment> segments;

  /// Interior window boundaries {t_1, ..., t_{M-1}} for curve splitting.
  std::vector<double> interior_breakpoints() const {
    std::vector<double> b;
    for (std::size_t i = 1; i < segments.size(); ++i) b.push_back(segments[i].t_begin);
    return b;
  }
};

struct CorridorResult {
  std::optional<Corridor> corridor;
  std::string failure;  // diagnostic when infeasible

  bool ok() const { return corridor.has_value(); }
};

/// One convex region per uniform time window. Seeds (the agent position plus
/// the target prediction sampled at window endpoints and midpoint) span a base
/// box inflated by `inflate` and clipped to `bounds`; every static obstacle
/// whose agent-radius-inflated shape reaches the base region contributes one
/// separating half-plane tangent to the inflated shape. Infeasibility (an
/// obstacle overlapping the seed hull, a seed outside bounds, an emptied
/// region) is reported as a value, never thrown.
CorridorResult build_corridor(const Vec2& agent_position, const PlanarCurve& target_prediction,
                              std::span<const Disc> static_discs,
                              std::span<const AABB> static_boxes, int windows, const AABB& bounds,
                              double agent_radius, double inflate);

}  // namespace mtrack
