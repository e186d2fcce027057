#pragma once

#include "mtrack/bernstein.hpp"

#include <optional>
#include <span>
#include <vector>

namespace mtrack {

/// Closed half-plane {x : normal . x <= offset} with unit normal.
struct HalfPlane {
  Vec2 normal;
  double offset;

  static HalfPlane through(const Vec2& point, const Vec2& outward_direction);
  double signed_distance(const Vec2& p) const { return normal.dot(p) - offset; }
  bool contains(const Vec2& p, double tol = 0.0) const { return signed_distance(p) <= tol; }
};

struct Disc {
  Vec2 center;
  double radius;
};

struct AABB {
  Vec2 min;
  Vec2 max;

  bool contains(const Vec2& p) const {
    return p.x() >= min.x() && p.x() <= max.x() && p.y() >= min.y() && p.y() <= max.y();
  }
  Vec2 closest_point(const Vec2& p) const {
    return {std::clamp(p.x(), min.x(), max.x()), std::clamp(p.y(), min.y(), max.y())};
  }
  Vec2 center() const { return 0.5 * (min + max); }
  AABB inflated(double r) const { return {min - Vec2(r, r), max + Vec2(r, r)}; }
};

/// Convex region kept in both representations: CCW vertex ring and the
/// matching outward half-planes. Degenerate results (empty interior) are
/// reported as std::nullopt by the operations that can produce them.
class ConvexPolygon {
 public:
  static ConvexPolygon from_aabb(const AABB& box);
  /// Vertices must be convex and CCW; throws std::invalid_argument otherwise.
  static ConvexPolygon from_vertices(std::vector<Vec2> vertices);

  std::span<const Vec2> vertices() const { return verts_; }
  std::span<const HalfPlane> halfplanes() const { return planes_; }
  double area() const;
  AABB bounding_box() const;

  bool contains(const Vec2& p, double tol = 0.0) const;
  bool contains_disc(const Vec2& center, double radius) const;
  bool contains_all(std::span<const Vec2> points, double tol = 0.0) const;

  /// Clip by a half-plane; nullopt when the intersection has no interior.
  std::optional<ConvexPolygon> clipped(const HalfPlane& hp) const;
  /// Inward offset by r (every half-plane shifted); nullopt when emptied.
  std::optional<ConvexPolygon> eroded(double r) const;

  /// Distance from p to the region (0 inside).
  double distance(const Vec2& p) const;
  /// Closest boundary-or-interior point to p.
  Vec2 closest_point(const Vec2& p) const;

 private:
  ConvexPolygon() = default;
  void rebuild_planes();

  std::vector<Vec2> verts_;
  std::vector<HalfPlane> planes_;
};

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);
Vec2 point_segment_closest(const Vec2& p, const Vec2& a, const Vec2& b);

struct ClosestPair {
  double distance;
  Vec2 on_first;
  Vec2 on_second;
};
ClosestPair segment_segment_closest(const Vec2& a1, const Vec2& b1, const Vec2& a2, const Vec2& b2);
double segment_segment_distance(const Vec2& a1, const Vec2& b1, const Vec2& a2, const Vec2& b2);

double point_aabb_distance(const Vec2& p, const AABB& box);
double segment_aabb_distance(const Vec2& a, const Vec2& b, const AABB& box);
double segment_disc_distance(const Vec2& a, const Vec2& b, const Disc& d);

/// CCW convex hull (monotone chain); collinear inputs give a 1- or 2-point chain.
std::vector<Vec2> convex_hull(std::span<const Vec2> points);

/// Closest point of the convex hull of `hull` (as a filled region) to q.
Vec2 hull_closest_point(std::span<const Vec2> hull, const Vec2& q);

/// Closest pair between the convex hull of `hull` and a solid box.
ClosestPair hull_aabb_closest(std::span<const Vec2> hull, const AABB& box);

/// Greedy cover of a point cloud by discs of the given radius.
std::vector<Disc> cover_points_with_discs(std::span<const Vec2> points, double radius);

}  // namespace mtrack
