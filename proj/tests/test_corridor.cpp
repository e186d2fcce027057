#include "mtrack/corridor.hpp"
#include "mtrack/predict.hpp"
#include "mtrack/rng.hpp"

#include <doctest.h>

using namespace mtrack;

namespace {

constexpr double kRc = 0.075;
const AABB kBounds{{-5, -5}, {5, 5}};

PlanarCurve target_pred(const Vec2& p, const Vec2& v, double T = 1.5) {
  return predict_constant_velocity({p, v, 0.075}, T, 3);
}

Vec2 random_in(Rng& rng, const AABB& box) {
  return {rng.uniform(box.min.x(), box.max.x()), rng.uniform(box.min.y(), box.max.y())};
}

}  // namespace

TEST_CASE("no obstacles: each window is the inflated seed box") {
  const Vec2 agent(0.0, 1.0);
  const PlanarCurve pred = target_pred({0, 0}, {1, 0});
  const CorridorResult res = build_corridor(agent, pred, {}, {}, 3, kBounds, kRc, 1.2);
  REQUIRE(res.ok());
  REQUIRE(res.corridor->segments.size() == 3);
  for (int m = 0; m < 3; ++m) {
    const CorridorSegment& seg = res.corridor->segments[m];
    CHECK(seg.t_begin == doctest::Approx(1.5 * m / 3));
    CHECK(seg.t_end == doctest::Approx(1.5 * (m + 1) / 3));
    // Expected box: seeds are the agent plus in-window target samples.
    const double t0 = seg.t_begin, t1 = seg.t_end;
    Vec2 lo = agent.cwiseMin(pred.evaluate(t0)).cwiseMin(pred.evaluate(t1));
    Vec2 hi = agent.cwiseMax(pred.evaluate(t0)).cwiseMax(pred.evaluate(t1));
    lo -= Vec2(1.2, 1.2);
    hi += Vec2(1.2, 1.2);
    const AABB bb = seg.region.bounding_box();
    CHECK((bb.min - lo).norm() <= 1e-9);
    CHECK((bb.max - hi).norm() <= 1e-9);
  }
  const auto breaks = res.corridor->interior_breakpoints();
  REQUIRE(breaks.size() == 2);
  CHECK(breaks[0] == doctest::Approx(0.5));
  CHECK(breaks[1] == doctest::Approx(1.0));
}

TEST_CASE("a far-away disc leaves the corridor unchanged") {
  const Vec2 agent(0.0, 1.0);
  const PlanarCurve pred = target_pred({0, 0}, {0.5, 0});
  const CorridorResult plain = build_corridor(agent, pred, {}, {}, 2, kBounds, kRc, 1.0);
  const Disc far{{4.5, 4.5}, 0.2};
  const CorridorResult with_disc =
      build_corridor(agent, pred, std::array<Disc, 1>{far}, {}, 2, kBounds, kRc, 1.0);
  REQUIRE(plain.ok());
  REQUIRE(with_disc.ok());
  for (int m = 0; m < 2; ++m) {
    CHECK(plain.corridor->segments[m].region.vertices().size() ==
          with_disc.corridor->segments[m].region.vertices().size());
    CHECK(plain.corridor->segments[m].region.area() ==
          doctest::Approx(with_disc.corridor->segments[m].region.area()));
  }
}

TEST_CASE("agent inside an inflated obstacle is infeasible with a diagnostic") {
  const PlanarCurve pred = target_pred({1, 0}, {0, 0});
  const Disc on_top{{0.0, 0.0}, 0.2};
  const CorridorResult res =
      build_corridor({0.1, 0.0}, pred, std::array<Disc, 1>{on_top}, {}, 3, kBounds, kRc, 1.0);
  CHECK_FALSE(res.ok());
  CHECK(res.failure.find("agent inside") != std::string::npos);
}

TEST_CASE("an obstacle between agent and target is infeasible") {
  const PlanarCurve pred = target_pred({2, 0}, {0, 0});
  const Disc blocking{{1.0, 0.0}, 0.3};
  const CorridorResult res =
      build_corridor({0, 0}, pred, std::array<Disc, 1>{blocking}, {}, 3, kBounds, kRc, 1.0);
  CHECK_FALSE(res.ok());
  CHECK(res.failure.find("blocks seed hull") != std::string::npos);
}

TEST_CASE("regions exclude obstacles and keep line-of-sight clear (sampling oracle)") {
  Rng rng(401);
  int corridors = 0;
  while (corridors < 40) {
    const Vec2 agent = random_in(rng, {{-2, -2}, {2, 2}});
    const Vec2 tpos = random_in(rng, {{-2, -2}, {2, 2}});
    const Vec2 tvel(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const PlanarCurve pred = target_pred(tpos, tvel);
    std::vector<Disc> discs;
    const int n_discs = rng.uniform_int(1, 4);
    for (int k = 0; k < n_discs; ++k) {
      discs.push_back({random_in(rng, {{-3, -3}, {3, 3}}), rng.uniform(0.1, 0.5)});
    }
    std::vector<AABB> boxes;
    if (rng.uniform01() < 0.5) {
      const Vec2 c = random_in(rng, {{-3, -3}, {3, 3}});
      boxes.push_back({c - Vec2(0.3, 0.2), c + Vec2(0.3, 0.2)});
    }
    const CorridorResult res = build_corridor(agent, pred, discs, boxes, 3, kBounds, kRc, 1.2);
    if (!res.ok()) continue;
    ++corridors;

    for (const CorridorSegment& seg : res.corridor->segments) {
      const AABB bb = seg.region.bounding_box();
      int tested = 0;
      int guard = 0;
      while (tested < 2000 && guard++ < 100000) {
        const Vec2 p = random_in(rng, bb);
        if (!seg.region.contains(p)) continue;
        ++tested;
        // Safety: region points stay at least r_c clear of every obstacle.
        for (const Disc& d : discs) {
          REQUIRE((p - d.center).norm() >= d.radius + kRc - 1e-9);
        }
        for (const AABB& b : boxes) {
          REQUIRE(point_aabb_distance(p, b) >= kRc - 1e-9);
        }
        // Visibility: the segment to any in-window target sample stays free.
        const double tm = rng.uniform(seg.t_begin, seg.t_end);
        const Vec2 q = pred.evaluate(tm);
        for (const Disc& d : discs) {
          REQUIRE(point_segment_distance(d.center, p, q) >= d.radius - 1e-9);
        }
        for (const AABB& b : boxes) {
          REQUIRE(segment_aabb_distance(p, q, b) >= -1e-12);
        }
      }
    }
  }
}

TEST_CASE("regions contain the target prediction over their window") {
  Rng rng(409);
  int corridors = 0;
  while (corridors < 50) {
    const Vec2 agent = random_in(rng, {{-2, -2}, {2, 2}});
    const PlanarCurve pred =
        target_pred(random_in(rng, {{-2, -2}, {2, 2}}), {rng.uniform(-1, 1), rng.uniform(-1, 1)});
    std::vector<Disc> discs;
    for (int k = 0; k < 2; ++k) {
      discs.push_back({random_in(rng, {{-3, -3}, {3, 3}}), rng.uniform(0.1, 0.4)});
    }
    const CorridorResult res = build_corridor(agent, pred, discs, {}, 3, kBounds, kRc, 1.0);
    if (!res.ok()) continue;
    ++corridors;
    for (const CorridorSegment& seg : res.corridor->segments) {
      for (int i = 0; i <= 20; ++i) {
        const double t = std::min(seg.t_begin + (seg.t_end - seg.t_begin) * (i / 20.0), pred.horizon());
        CHECK(seg.region.contains(pred.evaluate(t), 1e-9));
      }
    }
  }
}

TEST_CASE("monotone infeasibility: shrinking obstacles never hurts") {
  Rng rng(419);
  for (int rep = 0; rep < 200; ++rep) {
    const Vec2 agent = random_in(rng, {{-2, -2}, {2, 2}});
    const PlanarCurve pred =
        target_pred(random_in(rng, {{-2, -2}, {2, 2}}), {rng.uniform(-1, 1), rng.uniform(-1, 1)});
    std::vector<Disc> discs;
    for (int k = 0; k < 3; ++k) {
      discs.push_back({random_in(rng, {{-3, -3}, {3, 3}}), rng.uniform(0.1, 0.5)});
    }
    const CorridorResult fat = build_corridor(agent, pred, discs, {}, 3, kBounds, kRc, 1.0);
    if (!fat.ok()) continue;
    for (Disc& d : discs) d.radius *= rng.uniform(0.3, 0.95);
    const CorridorResult thin = build_corridor(agent, pred, discs, {}, 3, kBounds, kRc, 1.0);
    CHECK(thin.ok());
  }
}

TEST_CASE("corridor contract checks") {
  const PlanarCurve pred = target_pred({0, 0}, {0, 0});
  CHECK_THROWS_AS(build_corridor({1, 0}, pred, {}, {}, 0, kBounds, kRc, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_corridor({1, 0}, pred, {}, {}, 3, kBounds, kRc, 0.0),
                  std::invalid_argument);
  // Seeds outside bounds are infeasible, not fatal.
  const CorridorResult res = build_corridor({6, 6}, pred, {}, {}, 3, kBounds, kRc, 1.0);
  CHECK_FALSE(res.ok());
}
