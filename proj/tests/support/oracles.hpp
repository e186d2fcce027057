#pragma once

// Test-only reference implementations, independent of the library's
// production code paths: monomial-basis evaluation, Gauss-Legendre
// quadrature, dense grid minimization and a direct-transcription optimal
// control solve.

#include "mtrack/bernstein.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using mtrack::PlanarCurve;
using mtrack::ScalarCurve;
using mtrack::Vec2;

inline double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Monomial coefficients (in s = t / T) of a scalar Bernstein polynomial.
inline std::vector<double> to_monomial(const ScalarCurve& c) {
  const int n = c.degree();
  std::vector<double> mono(n + 1, 0.0);
  for (int j = 0; j <= n; ++j) {
    for (int k = 0; k <= j; ++k) {
      mono[j] += c.point(k) * binom(n, k) * binom(n - k, j - k) *
                 ((j - k) % 2 == 0 ? 1.0 : -1.0);
    }
  }
  return mono;
}

inline double horner(const std::vector<double>& mono, double s) {
  double acc = 0.0;
  for (int j = static_cast<int>(mono.size()) - 1; j >= 0; --j) acc = acc * s + mono[j];
  return acc;
}

inline double eval_monomial(const ScalarCurve& c, double t) {
  return horner(to_monomial(c), t / c.horizon());
}

/// Composite 10-point Gauss-Legendre quadrature with panel doubling until the
/// estimate is stable; exact to machine precision for the polynomial
/// integrands used in the tests.
inline double quadrature(const std::function<double(double)>& f, double a, double b) {
  static const double xs[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                               0.8650633666889845, 0.9739065285171717};
  static const double ws[5] = {0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                               0.1494513491505806, 0.0666713443086881};
  auto panel = [&](double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double acc = 0.0;
    for (int i = 0; i < 5; ++i) {
      acc += ws[i] * (f(mid + half * xs[i]) + f(mid - half * xs[i]));
    }
    return acc * half;
  };
  int panels = 4;
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int round = 0; round < 8; ++round) {
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
      acc += panel(a + (b - a) * (static_cast<double>(p) / panels),
                   a + (b - a) * (static_cast<double>(p + 1) / panels));
    }
    if (round > 0 && std::abs(acc - prev) <= 1e-13 * (1.0 + std::abs(acc))) return acc;
    prev = acc;
    panels *= 2;
  }
  return prev;
}

/// Direct transcription of the fixed-endpoint, free-terminal-velocity double
/// integrator: piecewise-constant control over `steps` intervals, minimum
/// sum of squared controls subject to the terminal position equality.
struct TranscriptionSolution {
  double mean_squared_control;     // (1/T) * integral of |u|^2
  std::vector<Vec2> positions;     // at the grid points, size steps + 1
};

inline TranscriptionSolution transcribe_min_effort(const Vec2& x0, const Vec2& v0, const Vec2& xf,
                                                   double T, int steps) {
  const double h = T / steps;
  // Contribution of u_k to x_N: h^2 * (steps - k - 1/2). Minimum-norm solve
  // per axis: u = a * (a^T a)^{-1} * b.
  Eigen::VectorXd a(steps);
  for (int k = 0; k < steps; ++k) a[k] = h * h * (steps - k - 0.5);
  const double ata = a.squaredNorm();
  const Vec2 b = xf - x0 - T * v0;
  Eigen::MatrixX2d u(steps, 2);
  for (int axis = 0; axis < 2; ++axis) u.col(axis) = a * (b[axis] / ata);

  TranscriptionSolution sol;
  sol.positions.resize(steps + 1);
  Vec2 x = x0, v = v0;
  sol.positions[0] = x;
  double cost = 0.0;
  for (int k = 0; k < steps; ++k) {
    const Vec2 uk = u.row(k).transpose();
    x += v * h + 0.5 * h * h * uk;
    v += h * uk;
    sol.positions[k + 1] = x;
    cost += uk.squaredNorm() * h;
  }
  sol.mean_squared_control = cost / T;
  return sol;
}

/// Dense minimum of f over [0, T] on a uniform grid of n+1 points.
inline double grid_min(const std::function<double(double)>& f, double T, int n) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) m = std::min(m, f(T * (static_cast<double>(i) / n)));
  return m;
}

/// Kolmogorov-Smirnov p-value (asymptotic) for samples against a uniform law
/// on [lo, hi].
inline double ks_uniform_pvalue(std::vector<double> samples, double lo, double hi) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = (samples[i] - lo) / (hi - lo);
    d = std::max(d, std::abs(cdf - (i + 1) / n));
    d = std::max(d, std::abs(cdf - i / n));
  }
  const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) {
    p += 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace oracle
