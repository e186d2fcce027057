#include "mtrack/predict.hpp"
#include "mtrack/rng.hpp"

#include <doctest.h>

using namespace mtrack;

TEST_CASE("constant-velocity prediction: stationary and moving objects") {
  const PlanarCurve still = predict_constant_velocity({{1, 2}, {0, 0}, 0.1}, 2.0, 3);
  CHECK(still.degree() == 3);
  for (int i = 0; i <= 10; ++i) {
    CHECK((still.evaluate(0.2 * i) - Vec2(1, 2)).norm() <= 1e-14);
  }

  const PlanarCurve moving = predict_constant_velocity({{0, 0}, {1, 0}, 0.1}, 2.0, 3);
  CHECK((moving.evaluate(2.0) - Vec2(2, 0)).norm() <= 1e-12);
  CHECK((moving.front() - Vec2(0, 0)).norm() == 0.0);
}

TEST_CASE("elevated prediction matches the affine motion exactly") {
  Rng rng(307);
  for (int rep = 0; rep < 20; ++rep) {
    const MovingObjectState s{{rng.uniform(-2, 2), rng.uniform(-2, 2)},
                              {rng.uniform(-1, 1), rng.uniform(-1, 1)},
                              0.075};
    const double T = rng.uniform(0.5, 3.0);
    const PlanarCurve pred = predict_constant_velocity(s, T, 3);
    for (int i = 0; i <= 100; ++i) {
      const double t = T * (i / 100.0);
      CHECK((pred.evaluate(t) - (s.position + t * s.velocity)).norm() <= 1e-12);
    }
  }
}

TEST_CASE("velocity estimation: exact slopes and degenerate input") {
  const TimedPosition two[] = {{0.0, {0, 0}}, {1.0, {1, 1}}};
  const VelocityEstimate v2 = estimate_velocity(two, 2);
  CHECK(v2.reliable);
  CHECK((v2.velocity - Vec2(1, 1)).norm() <= 1e-12);

  const TimedPosition still[] = {{0.0, {2, 3}}, {0.5, {2, 3}}, {1.0, {2, 3}}};
  const VelocityEstimate vs = estimate_velocity(still, 3);
  CHECK(vs.reliable);
  CHECK(vs.velocity.norm() <= 1e-12);

  const TimedPosition one[] = {{0.0, {1, 1}}};
  const VelocityEstimate v1 = estimate_velocity(one, 4);
  CHECK_FALSE(v1.reliable);
  CHECK(v1.velocity.norm() == 0.0);

  const TimedPosition same_time[] = {{1.0, {0, 0}}, {1.0, {5, 5}}};
  CHECK_FALSE(estimate_velocity(same_time, 2).reliable);
}

TEST_CASE("windowed least squares recovers noiseless linear motion") {
  Rng rng(311);
  for (int rep = 0; rep < 20; ++rep) {
    const Vec2 p0(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const Vec2 v(rng.uniform(-2, 2), rng.uniform(-2, 2));
    std::vector<TimedPosition> hist;
    for (int i = 0; i < 10; ++i) {
      const double t = 0.1 * i;
      hist.push_back({t, p0 + t * v});
    }
    const VelocityEstimate est = estimate_velocity(hist, 5);
    CHECK(est.reliable);
    CHECK((est.velocity - v).norm() <= 1e-12);
  }
}

TEST_CASE("prediction error is zero for truly constant-velocity motion") {
  const MovingObjectState s{{0.3, -0.7}, {0.4, 0.9}, 0.075};
  const PlanarCurve pred = predict_constant_velocity(s, 1.5, 3);
  double max_err = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double t = 1.5 * i / 1000;
    max_err = std::max(max_err, (pred.evaluate(t) - (s.position + t * s.velocity)).norm());
  }
  CHECK(max_err <= 1e-12);
}
