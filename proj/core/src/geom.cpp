#include "mtrack/geom.hpp"

#include <algorithm>
#include <cmath>

namespace mtrack {

namespace {

constexpr double kDegenerateArea = 1e-12;
constexpr double kVertexMergeEps = 1e-12;

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace

HalfPlane HalfPlane::through(const Vec2& point, const Vec2& outward_direction) {
  const double n = outward_direction.norm();
  if (n < 1e-15) throw std::invalid_argument("HalfPlane::through: zero direction");
  const Vec2 unit = outward_direction / n;
  return {unit, unit.dot(point)};
}

ConvexPolygon ConvexPolygon::from_aabb(const AABB& box) {
  if (!(box.min.x() < box.max.x() && box.min.y() < box.max.y())) {
    throw std::invalid_argument("ConvexPolygon::from_aabb: degenerate box");
  }
  ConvexPolygon p;
  p.verts_ = {box.min, {box.max.x(), box.min.y()}, box.max, {box.min.x(), box.max.y()}};
  p.rebuild_planes();
  return p;
}

ConvexPolygon ConvexPolygon::from_vertices(std::vector<Vec2> vertices) {
  if (vertices.size() < 3) throw std::invalid_argument("ConvexPolygon: needs >= 3 vertices");
  ConvexPolygon p;
  p.verts_ = std::move(vertices);
  const int n = static_cast<int>(p.verts_.size());
  for (int i = 0; i < n; ++i) {
    const Vec2& a = p.verts_[i];
    const Vec2& b = p.verts_[(i + 1) % n];
    const Vec2& c = p.verts_[(i + 2) % n];
    if (cross2(b - a, c - b) <= 0.0) {
      throw std::invalid_argument("ConvexPolygon: vertices not strictly convex CCW");
    }
  }
  p.rebuild_planes();
  return p;
}

void ConvexPolygon::rebuild_planes() {
  planes_.clear();
  const int n = static_cast<int>(verts_.size());
  planes_.reserve(n);
  for (int i = 0; i < n; ++i) {
    const Vec2 a = verts_[i];
    const Vec2 b = verts_[(i + 1) % n];
    const Vec2 e = b - a;
    const Vec2 outward(e.y(), -e.x());  // right of a CCW edge
    planes_.push_back(HalfPlane::through(a, outward));
  }
}

double ConvexPolygon::area() const {
  double a = 0.0;
  const int n = static_cast<int>(verts_.size());
  for (int i = 0; i < n; ++i) a += cross2(verts_[i], verts_[(i + 1) % n]);
  return 0.5 * a;
}

AABB ConvexPolygon::bounding_box() const {
  Vec2 lo = verts_[0], hi = verts_[0];
  for (const Vec2& v : verts_) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return {lo, hi};
}

bool ConvexPolygon::contains(const Vec2& p, double tol) const {
  for (const HalfPlane& hp : planes_) {
    if (hp.signed_distance(p) > tol) return false;
  }
  return true;
}

bool ConvexPolygon::contains_disc(const Vec2& center, double radius) const {
  for (const HalfPlane& hp : planes_) {
    if (hp.signed_distance(center) > -radius) return false;
  }
  return true;
}

bool ConvexPolygon::contains_all(std::span<const Vec2> points, double tol) const {
  for (const Vec2& p : points) {
    if (!contains(p, tol)) return false;
  }
  return true;
}

std::optional<ConvexPolygon> ConvexPolygon::clipped(const HalfPlane& hp) const {
  // Sutherland-Hodgman against a single half-plane.
  std::vector<Vec2> out;
  const int n = static_cast<int>(verts_.size());
  out.reserve(n + 1);
  for (int i = 0; i < n; ++i) {
    const Vec2& cur = verts_[i];
    const Vec2& nxt = verts_[(i + 1) % n];
    const double dc = hp.signed_distance(cur);
    const double dn = hp.signed_distance(nxt);
    if (dc <= 0.0) out.push_back(cur);
    if ((dc < 0.0 && dn > 0.0) || (dc > 0.0 && dn < 0.0)) {
      out.push_back(cur + (dc / (dc - dn)) * (nxt - cur));
    }
  }
  // Merge near-duplicate vertices produced by clipping through a vertex.
  std::vector<Vec2> merged;
  merged.reserve(out.size());
  for (const Vec2& v : out) {
    if (merged.empty() || (v - merged.back()).norm() > kVertexMergeEps) merged.push_back(v);
  }
  while (merged.size() > 1 && (merged.front() - merged.back()).norm() <= kVertexMergeEps) {
    merged.pop_back();
  }
  if (merged.size() < 3) return std::nullopt;
  ConvexPolygon p;
  p.verts_ = std::move(merged);
  if (p.area() <= kDegenerateArea) return std::nullopt;
  p.rebuild_planes();
  return p;
}

std::optional<ConvexPolygon> ConvexPolygon::eroded(double r) const {
  if (r < 0.0) throw std::invalid_argument("ConvexPolygon::eroded: negative radius");
  if (r == 0.0) return *this;
  std::optional<ConvexPolygon> out = ConvexPolygon::from_aabb(bounding_box().inflated(1.0));
  for (const HalfPlane& hp : planes_) {
    out = out->clipped({hp.normal, hp.offset - r});
    if (!out) return std::nullopt;
  }
  return out;
}

double ConvexPolygon::distance(const Vec2& p) const {
  return (closest_point(p) - p).norm();
}

Vec2 ConvexPolygon::closest_point(const Vec2& p) const {
  if (contains(p)) return p;
  double best = std::numeric_limits<double>::infinity();
  Vec2 bp = verts_[0];
  const int n = static_cast<int>(verts_.size());
  for (int i = 0; i < n; ++i) {
    const Vec2 q = point_segment_closest(p, verts_[i], verts_[(i + 1) % n]);
    const double d = (q - p).norm();
    if (d < best) {
      best = d;
      bp = q;
    }
  }
  return bp;
}

Vec2 point_segment_closest(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 < 1e-30) return a;
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return a + t * ab;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  return (point_segment_closest(p, a, b) - p).norm();
}

namespace {

bool segments_properly_intersect(const Vec2& a1, const Vec2& b1, const Vec2& a2, const Vec2& b2,
                                 Vec2* where) {
  const Vec2 d1 = b1 - a1;
  const Vec2 d2 = b2 - a2;
  const double denom = cross2(d1, d2);
  if (std::abs(denom) < 1e-30) return false;  // parallel; endpoint cases cover it
  const double t = cross2(a2 - a1, d2) / denom;
  const double u = cross2(a2 - a1, d1) / denom;
  if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return false;
  if (where) *where = a1 + t * d1;
  return true;
}

}  // namespace

ClosestPair segment_segment_closest(const Vec2& a1, const Vec2& b1, const Vec2& a2, const Vec2& b2) {
  Vec2 x;
  if (segments_properly_intersect(a1, b1, a2, b2, &x)) return {0.0, x, x};
  ClosestPair best{std::numeric_limits<double>::infinity(), a1, a2};
  auto consider = [&](const Vec2& p, const Vec2& sa, const Vec2& sb, bool p_on_first) {
    const Vec2 q = point_segment_closest(p, sa, sb);
    const double d = (q - p).norm();
    if (d < best.distance) best = p_on_first ? ClosestPair{d, p, q} : ClosestPair{d, q, p};
  };
  consider(a1, a2, b2, true);
  consider(b1, a2, b2, true);
  consider(a2, a1, b1, false);
  consider(b2, a1, b1, false);
  return best;
}

double segment_segment_distance(const Vec2& a1, const Vec2& b1, const Vec2& a2, const Vec2& b2) {
  return segment_segment_closest(a1, b1, a2, b2).distance;
}

double point_aabb_distance(const Vec2& p, const AABB& box) {
  return (box.closest_point(p) - p).norm();
}

double segment_aabb_distance(const Vec2& a, const Vec2& b, const AABB& box) {
  if (box.contains(a) || box.contains(b)) return 0.0;
  const Vec2 c00 = box.min;
  const Vec2 c10(box.max.x(), box.min.y());
  const Vec2 c11 = box.max;
  const Vec2 c01(box.min.x(), box.max.y());
  double d = segment_segment_distance(a, b, c00, c10);
  d = std::min(d, segment_segment_distance(a, b, c10, c11));
  d = std::min(d, segment_segment_distance(a, b, c11, c01));
  d = std::min(d, segment_segment_distance(a, b, c01, c00));
  return d;
}

double segment_disc_distance(const Vec2& a, const Vec2& b, const Disc& d) {
  return std::max(0.0, point_segment_distance(d.center, a, b) - d.radius);
}

std::vector<Vec2> convex_hull(std::span<const Vec2> points) {
  std::vector<Vec2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec2& a, const Vec2& b) { return (a - b).norm() <= kVertexMergeEps; }),
            pts.end());
  const int n = static_cast<int>(pts.size());
  if (n <= 2) return pts;
  std::vector<Vec2> h(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && cross2(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  const int lower = k + 1;
  for (int i = n - 2; i >= 0; --i) {
    while (k >= lower && cross2(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

namespace {

bool point_in_hull(std::span<const Vec2> hull, const Vec2& q) {
  const int n = static_cast<int>(hull.size());
  if (n < 3) return false;
  for (int i = 0; i < n; ++i) {
    if (cross2(hull[(i + 1) % n] - hull[i], q - hull[i]) < 0.0) return false;
  }
  return true;
}

}  // namespace

Vec2 hull_closest_point(std::span<const Vec2> hull, const Vec2& q) {
  if (hull.empty()) throw std::invalid_argument("hull_closest_point: empty hull");
  if (hull.size() == 1) return hull[0];
  if (point_in_hull(hull, q)) return q;
  const int n = static_cast<int>(hull.size());
  double best = std::numeric_limits<double>::infinity();
  Vec2 bp = hull[0];
  const int edges = (n == 2) ? 1 : n;
  for (int i = 0; i < edges; ++i) {
    const Vec2 p = point_segment_closest(q, hull[i], hull[(i + 1) % n]);
    const double d = (p - q).norm();
    if (d < best) {
      best = d;
      bp = p;
    }
  }
  return bp;
}

ClosestPair hull_aabb_closest(std::span<const Vec2> hull, const AABB& box) {
  if (hull.empty()) throw std::invalid_argument("hull_aabb_closest: empty hull");
  // Overlap checks first.
  for (const Vec2& v : hull) {
    if (box.contains(v)) return {0.0, v, v};
  }
  const Vec2 bc[4] = {box.min, {box.max.x(), box.min.y()}, box.max, {box.min.x(), box.max.y()}};
  for (const Vec2& c : bc) {
    if (point_in_hull(hull, c)) return {0.0, c, c};
  }
  const int n = static_cast<int>(hull.size());
  ClosestPair best{std::numeric_limits<double>::infinity(), hull[0], box.min};
  const int edges = (n == 1) ? 1 : ((n == 2) ? 1 : n);
  for (int i = 0; i < edges; ++i) {
    const Vec2 ha = hull[i];
    const Vec2 hb = hull[(i + 1) % n];
    for (int j = 0; j < 4; ++j) {
      const ClosestPair cp = segment_segment_closest(ha, n == 1 ? ha : hb, bc[j], bc[(j + 1) % 4]);
      if (cp.distance < best.distance) best = cp;
    }
  }
  return best;
}

std::vector<Disc> cover_points_with_discs(std::span<const Vec2> points, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("cover_points_with_discs: radius must be positive");
  std::vector<Disc> discs;
  std::vector<bool> covered(points.size(), false);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (covered[i]) continue;
    const Vec2 c = points[i];
    discs.push_back({c, radius});
    for (std::size_t j = i; j < points.size(); ++j) {
      if (!covered[j] && (points[j] - c).norm() <= radius) covered[j] = true;
    }
  }
  return discs;
}

}  // namespace mtrack
