#include "mtrack/bernstein.hpp"

namespace mtrack {
namespace detail {

const std::array<std::array<double, kBinomialRows>, kBinomialRows>& binomial_table() {
  static const auto table = [] {
    std::array<std::array<double, kBinomialRows>, kBinomialRows> t{};
    for (int n = 0; n < kBinomialRows; ++n) {
      t[n][0] = 1.0;
      for (int k = 1; k <= n; ++k) {
        t[n][k] = t[n - 1][k - 1] + (k < n ? t[n - 1][k] : 0.0);
      }
    }
    return t;
  }();
  return table;
}

}  // namespace detail

bool horizons_match(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

namespace {

void require_same_horizon(double a, double b) {
  if (!horizons_match(a, b)) {
    throw std::invalid_argument("bernstein: horizon mismatch between operands");
  }
}

template <class P>
BernsteinCurve<P> combine(const BernsteinCurve<P>& a, const BernsteinCurve<P>& b, double sign) {
  require_same_horizon(a.horizon(), b.horizon());
  const int n = std::max(a.degree(), b.degree());
  const auto ae = a.elevated(n);
  const auto be = b.elevated(n);
  std::array<P, BernsteinCurve<P>::kMaxPoints> pts;
  for (int i = 0; i <= n; ++i) pts[i] = ae.point(i) + sign * be.point(i);
  return BernsteinCurve<P>(std::span<const P>(pts.data(), n + 1), a.horizon());
}

// Binomial convolution of coefficient sequences. `mul` maps a pair of control
// points to their product (scalar*scalar or Vec2 dot).
template <class P, class Mul>
ScalarCurve convolve(const BernsteinCurve<P>& a, const BernsteinCurve<P>& b, Mul mul) {
  require_same_horizon(a.horizon(), b.horizon());
  const int na = a.degree(), nb = b.degree();
  if (na + nb + 1 > ScalarCurve::kMaxPoints) {
    throw std::invalid_argument("bernstein: product degree exceeds supported maximum");
  }
  std::array<double, ScalarCurve::kMaxPoints> c{};
  for (int k = 0; k <= na + nb; ++k) {
    const int lo = std::max(0, k - nb);
    const int hi = std::min(na, k);
    double acc = 0.0;
    for (int i = lo; i <= hi; ++i) {
      const double w = detail::binomial(na, i) * detail::binomial(nb, k - i) /
                       detail::binomial(na + nb, k);
      acc += w * mul(a.point(i), b.point(k - i));
    }
    c[k] = acc;
  }
  return ScalarCurve(std::span<const double>(c.data(), na + nb + 1), a.horizon());
}

}  // namespace

ScalarCurve product(const ScalarCurve& a, const ScalarCurve& b) {
  return convolve(a, b, [](double x, double y) { return x * y; });
}

ScalarCurve dot(const PlanarCurve& a, const PlanarCurve& b) {
  return convolve(a, b, [](const Vec2& x, const Vec2& y) { return x.dot(y); });
}

ScalarCurve sum(const ScalarCurve& a, const ScalarCurve& b) { return combine(a, b, 1.0); }
ScalarCurve difference(const ScalarCurve& a, const ScalarCurve& b) { return combine(a, b, -1.0); }
PlanarCurve sum(const PlanarCurve& a, const PlanarCurve& b) { return combine(a, b, 1.0); }
PlanarCurve difference(const PlanarCurve& a, const PlanarCurve& b) { return combine(a, b, -1.0); }

ScalarCurve scaled(const ScalarCurve& a, double factor) {
  std::array<double, ScalarCurve::kMaxPoints> c;
  for (int i = 0; i <= a.degree(); ++i) c[i] = factor * a.point(i);
  return ScalarCurve(std::span<const double>(c.data(), a.degree() + 1), a.horizon());
}

ScalarCurve offset(const ScalarCurve& a, double shift) {
  std::array<double, ScalarCurve::kMaxPoints> c;
  for (int i = 0; i <= a.degree(); ++i) c[i] = a.point(i) + shift;
  return ScalarCurve(std::span<const double>(c.data(), a.degree() + 1), a.horizon());
}

PlanarCurve translated(const PlanarCurve& a, const Vec2& shift) {
  std::array<Vec2, PlanarCurve::kMaxPoints> c;
  for (int i = 0; i <= a.degree(); ++i) c[i] = a.point(i) + shift;
  return PlanarCurve(std::span<const Vec2>(c.data(), a.degree() + 1), a.horizon());
}

ScalarCurve component(const PlanarCurve& a, int axis) {
  if (axis != 0 && axis != 1) throw std::invalid_argument("component: axis must be 0 or 1");
  std::array<double, ScalarCurve::kMaxPoints> c;
  for (int i = 0; i <= a.degree(); ++i) c[i] = a.point(i)[axis];
  return ScalarCurve(std::span<const double>(c.data(), a.degree() + 1), a.horizon());
}

double definite_integral(const ScalarCurve& a) {
  double s = 0.0;
  for (int i = 0; i <= a.degree(); ++i) s += a.point(i);
  return a.horizon() / (a.degree() + 1) * s;
}

double min_coefficient(const ScalarCurve& a) {
  double m = a.point(0);
  for (int i = 1; i <= a.degree(); ++i) m = std::min(m, a.point(i));
  return m;
}

double max_coefficient(const ScalarCurve& a) {
  double m = a.point(0);
  for (int i = 1; i <= a.degree(); ++i) m = std::max(m, a.point(i));
  return m;
}

bool coefficients_nonnegative(const ScalarCurve& a) {
  return min_coefficient(a) >= 0.0;
}

}  // namespace mtrack
