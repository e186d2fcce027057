#pragma once

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mtrack {

using Vec2 = Eigen::Vector2d;

namespace detail {

template <class P>
inline P zero_point() {
  if constexpr (std::is_same_v<P, double>) {
    return 0.0;
  } else {
    return P::Zero();
  }
}

// Pascal's triangle in doubles; exact for n <= 31.
inline constexpr int kBinomialRows = 32;
const std::array<std::array<double, kBinomialRows>, kBinomialRows>& binomial_table();
inline double binomial(int n, int k) { return binomial_table()[n][k]; }

}  // namespace detail

/// Polynomial curve in Bernstein form on [0, horizon].
///
/// The point type P is double for scalar constraint polynomials and Vec2 for
/// planar trajectories. Control points are stored inline (no heap), sized for
/// the degrees the planner produces (products of trajectory polynomials reach
/// degree 12; the cap leaves headroom for user curves up to degree 31).
template <class P>
class BernsteinCurve {
 public:
  static constexpr int kMaxPoints = 32;

  /// Zero constant curve on [0, 1].
  BernsteinCurve() { pts_[0] = detail::zero_point<P>(); }

  BernsteinCurve(std::span<const P> points, double horizon) {
    assign(points, horizon);
  }
  BernsteinCurve(std::initializer_list<P> points, double horizon) {
    assign(std::span<const P>(points.begin(), points.size()), horizon);
  }

  static BernsteinCurve constant(const P& value, double horizon, int degree = 0) {
    BernsteinCurve c;
    c.horizon_ = check_horizon(horizon);
    c.count_ = check_count(degree + 1);
    for (int i = 0; i <= degree; ++i) c.pts_[i] = value;
    return c;
  }

  int degree() const { return count_ - 1; }
  double horizon() const { return horizon_; }
  std::span<const P> control_points() const {
    return {pts_.data(), static_cast<std::size_t>(count_)};
  }
  const P& point(int k) const { return pts_[k]; }
  const P& front() const { return pts_[0]; }
  const P& back() const { return pts_[count_ - 1]; }

  /// Evaluate by de Casteljau recursion. t must lie in [0, horizon].
  P evaluate(double t) const {
    if (!(t >= 0.0 && t <= horizon_)) {
      throw std::domain_error("BernsteinCurve::evaluate: t outside [0, horizon]");
    }
    const double s = t / horizon_;
    std::array<P, kMaxPoints> w;
    for (int i = 0; i < count_; ++i) w[i] = pts_[i];
    for (int r = count_ - 1; r > 0; --r) {
      for (int i = 0; i < r; ++i) w[i] = (1.0 - s) * w[i] + s * w[i + 1];
    }
    return w[0];
  }
  P operator()(double t) const { return evaluate(t); }

  /// Derivative in Bernstein form; a degree-0 input yields the zero curve.
  BernsteinCurve derivative() const {
    BernsteinCurve d;
    d.horizon_ = horizon_;
    if (count_ == 1) {
      d.count_ = 1;
      d.pts_[0] = detail::zero_point<P>();
      return d;
    }
    const int n = degree();
    d.count_ = count_ - 1;
    for (int i = 0; i < d.count_; ++i) {
      d.pts_[i] = (static_cast<double>(n) / horizon_) * (pts_[i + 1] - pts_[i]);
    }
    return d;
  }

  /// Degree elevation by repeated single-step elevation (exact representation).
  BernsteinCurve elevated(int target_degree) const {
    if (target_degree < degree()) {
      throw std::invalid_argument("BernsteinCurve::elevated: target below current degree");
    }
    BernsteinCurve e = *this;
    while (e.degree() < target_degree) {
      const int n = e.degree();
      check_count(n + 2);
      e.pts_[n + 1] = e.pts_[n];
      for (int j = n; j >= 1; --j) {
        const double a = static_cast<double>(j) / (n + 1);
        e.pts_[j] = a * e.pts_[j - 1] + (1.0 - a) * e.pts_[j];
      }
      ++e.count_;
    }
    return e;
  }

  /// Subdivide at t into two curves reparameterized to horizons t and horizon - t.
  std::pair<BernsteinCurve, BernsteinCurve> split_at(double t) const {
    if (!(t > 0.0 && t < horizon_)) {
      throw std::invalid_argument("BernsteinCurve::split_at: breakpoint outside (0, horizon)");
    }
    const double s = t / horizon_;
    BernsteinCurve left, right;
    left.horizon_ = t;
    right.horizon_ = horizon_ - t;
    left.count_ = right.count_ = count_;
    std::array<P, kMaxPoints> w;
    for (int i = 0; i < count_; ++i) w[i] = pts_[i];
    left.pts_[0] = w[0];
    right.pts_[count_ - 1] = w[count_ - 1];
    for (int r = count_ - 1; r > 0; --r) {
      for (int i = 0; i < r; ++i) w[i] = (1.0 - s) * w[i] + s * w[i + 1];
      left.pts_[count_ - r] = w[0];
      right.pts_[r - 1] = w[r - 1];
    }
    return {left, right};
  }

  /// Split at strictly increasing interior breakpoints; an empty list returns
  /// the curve unchanged as a single piece.
  std::vector<BernsteinCurve> split(std::span<const double> breakpoints) const {
    double prev = 0.0;
    for (double b : breakpoints) {
      if (!(b > prev && b < horizon_)) {
        throw std::invalid_argument("BernsteinCurve::split: breakpoints not strictly increasing inside (0, horizon)");
      }
      prev = b;
    }
    std::vector<BernsteinCurve> pieces;
    pieces.reserve(breakpoints.size() + 1);
    BernsteinCurve rest = *this;
    double consumed = 0.0;
    for (double b : breakpoints) {
      auto [l, r] = rest.split_at(b - consumed);
      pieces.push_back(l);
      rest = r;
      consumed = b;
    }
    pieces.push_back(rest);
    return pieces;
  }

 private:
  static double check_horizon(double h) {
    if (!(h > 0.0) || !std::isfinite(h)) {
      throw std::invalid_argument("BernsteinCurve: horizon must be positive and finite");
    }
    return h;
  }
  static int check_count(int n) {
    if (n < 1 || n > kMaxPoints) {
      throw std::invalid_argument("BernsteinCurve: control point count out of range");
    }
    return n;
  }
  void assign(std::span<const P> points, double horizon) {
    horizon_ = check_horizon(horizon);
    count_ = check_count(static_cast<int>(points.size()));
    for (int i = 0; i < count_; ++i) pts_[i] = points[i];
  }

  std::array<P, kMaxPoints> pts_{};
  int count_ = 1;
  double horizon_ = 1.0;
};

using ScalarCurve = BernsteinCurve<double>;
using PlanarCurve = BernsteinCurve<Vec2>;

/// True when two curves live on the same horizon (replan cycles share one T).
bool horizons_match(double a, double b);

/// Pointwise product of scalar curves via binomial convolution.
ScalarCurve product(const ScalarCurve& a, const ScalarCurve& b);

/// Sum of coordinate products of two planar curves.
ScalarCurve dot(const PlanarCurve& a, const PlanarCurve& b);

ScalarCurve sum(const ScalarCurve& a, const ScalarCurve& b);
ScalarCurve difference(const ScalarCurve& a, const ScalarCurve& b);
PlanarCurve sum(const PlanarCurve& a, const PlanarCurve& b);
PlanarCurve difference(const PlanarCurve& a, const PlanarCurve& b);

ScalarCurve scaled(const ScalarCurve& a, double factor);
/// Adds a constant to the polynomial (shifts every coefficient).
ScalarCurve offset(const ScalarCurve& a, double shift);
/// Translates a planar curve by a constant vector.
PlanarCurve translated(const PlanarCurve& a, const Vec2& shift);

/// Scalar curve of one coordinate (axis 0 or 1) of a planar curve.
ScalarCurve component(const PlanarCurve& a, int axis);

/// Exact integral over [0, horizon]: T/(n+1) times the coefficient sum.
double definite_integral(const ScalarCurve& a);

double min_coefficient(const ScalarCurve& a);
double max_coefficient(const ScalarCurve& a);

/// Sufficient certificate for pointwise nonnegativity on [0, horizon]
/// (convex hull property). A false result only rejects; it proves nothing.
bool coefficients_nonnegative(const ScalarCurve& a);

}  // namespace mtrack
