#pragma once

// Quantile grids, monotone piecewise-cubic tabulations and small
// finite-difference helpers shared by every module.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/pchip.hpp>

#include "fpa/numeric/errors.hpp"

namespace fpa {

// Chebyshev-clustered grid on [a,b]: nodes accumulate at both endpoints,
// which is where quantile functions need resolution.
inline std::vector<double> chebyshev_grid(std::size_t n = 1001, double a = 0.0,
                                          double b = 1.0) {
  if (n < 2) throw config_error("chebyshev_grid: need at least 2 nodes");
  std::vector<double> g(n);
  const double pi = 3.14159265358979323846;
  for (std::size_t i = 0; i < n; ++i) {
    double t = 0.5 * (1.0 - std::cos(pi * double(i) / double(n - 1)));
    g[i] = a + (b - a) * t;
  }
  g.front() = a;
  g.back() = b;
  return g;
}

inline std::vector<double> uniform_grid(std::size_t n, double a = 0.0,
                                        double b = 1.0) {
  if (n < 2) throw config_error("uniform_grid: need at least 2 nodes");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = a + (b - a) * double(i) / double(n - 1);
  g.back() = b;
  return g;
}

// Three-point local-quadratic derivative at node i of a tabulated function;
// one-sided at the endpoints.  Grid may be non-uniform.
inline double deriv3(const std::vector<double>& x, const std::vector<double>& y,
                     std::size_t i) {
  const std::size_t n = x.size();
  if (n < 3 || y.size() != n) throw numeric_error("deriv3: need >= 3 nodes");
  std::size_t j = i;
  if (j == 0) j = 1;
  if (j == n - 1) j = n - 2;
  const double x0 = x[j - 1], x1 = x[j], x2 = x[j + 1];
  const double y0 = y[j - 1], y1 = y[j], y2 = y[j + 1];
  const double h1 = x1 - x0, h2 = x2 - x1;
  if (h1 <= 0 || h2 <= 0) throw numeric_error("deriv3: grid not increasing");
  const double xi = x[i];
  // derivative of the quadratic through the three nodes, evaluated at x[i]
  const double d01 = (y1 - y0) / h1;
  const double d12 = (y2 - y1) / h2;
  const double c = (d12 - d01) / (h2 + h1);  // half second difference
  return d01 + c * (2.0 * xi - x0 - x1);
}

// Pool-adjacent-violators: smallest L2 change making y non-decreasing.
inline std::vector<double> pava_increasing(std::vector<double> y) {
  const std::size_t n = y.size();
  std::vector<double> level(n), weight(n);
  std::vector<std::size_t> count(n);
  std::size_t blocks = 0;
  for (std::size_t i = 0; i < n; ++i) {
    level[blocks] = y[i];
    weight[blocks] = 1.0;
    count[blocks] = 1;
    ++blocks;
    while (blocks > 1 && level[blocks - 2] > level[blocks - 1]) {
      const double w = weight[blocks - 2] + weight[blocks - 1];
      level[blocks - 2] =
          (level[blocks - 2] * weight[blocks - 2] +
           level[blocks - 1] * weight[blocks - 1]) / w;
      weight[blocks - 2] = w;
      count[blocks - 2] += count[blocks - 1];
      --blocks;
    }
  }
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t b = 0; b < blocks; ++b)
    out.insert(out.end(), count[b], level[b]);
  return out;
}

// Monotone (shape-preserving) cubic through a strictly increasing tabulation.
// Supports evaluation, analytic differentiation of the interpolant and
// inversion by bisection, the three operations every quantile/cdf object
// needs.  Evaluation outside [x_min, x_max] clamps to the endpoint values.
class MonotoneCurve {
 public:
  MonotoneCurve() = default;

  MonotoneCurve(std::vector<double> x, std::vector<double> y) {
    if (x.size() != y.size() || x.size() < 4)
      throw numeric_error("MonotoneCurve: need >= 4 nodes");
    for (std::size_t i = 1; i < x.size(); ++i) {
      if (!(x[i] > x[i - 1]))
        throw numeric_error("MonotoneCurve: abscissae must strictly increase");
      if (y[i] < y[i - 1])
        throw numeric_error("MonotoneCurve: ordinates must be non-decreasing");
    }
    xs_ = x;
    ys_ = y;
    interp_.emplace(std::move(x), std::move(y));
  }

  double operator()(double x) const {
    if (x <= xs_.front()) return ys_.front();
    if (x >= xs_.back()) return ys_.back();
    return (*interp_)(x);
  }

  double derivative(double x) const {
    x = std::clamp(x, xs_.front(), xs_.back());
    return interp_->prime(x);
  }

  // Solve f(x)=y by bisection on the monotone interpolant.
  double inverse(double y, double xtol = 1e-12) const {
    if (y <= ys_.front()) return xs_.front();
    if (y >= ys_.back()) return xs_.back();
    // locate bracketing nodes first
    auto it = std::lower_bound(ys_.begin(), ys_.end(), y);
    std::size_t hi = std::size_t(it - ys_.begin());
    std::size_t lo = hi == 0 ? 0 : hi - 1;
    double a = xs_[lo], b = xs_[hi];
    double fa = ys_[lo] - y;
    for (int iter = 0; iter < 200 && (b - a) > xtol; ++iter) {
      double m = 0.5 * (a + b);
      double fm = (*interp_)(m)-y;
      if ((fa <= 0.0) == (fm <= 0.0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    return 0.5 * (a + b);
  }

  double x_min() const { return xs_.front(); }
  double x_max() const { return xs_.back(); }
  double y_min() const { return ys_.front(); }
  double y_max() const { return ys_.back(); }
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }
  bool empty() const { return xs_.empty(); }

 private:
  std::vector<double> xs_, ys_;
  mutable std::optional<boost::math::interpolators::pchip<std::vector<double>>>
      interp_;
};

// Least-squares slope of y on x.
inline double ls_slope(const std::vector<double>& x,
                       const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw numeric_error("ls_slope: need >= 2 points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw numeric_error("ls_slope: degenerate abscissae");
  return sxy / sxx;
}

// One-sided fourth-order finite-difference derivative at the right endpoint
// of a uniformly resampled window of a curve.  Used where an endpoint slope
// of a smooth tabulation is needed with high accuracy.
inline double endpoint_slope_right(const MonotoneCurve& c, double window) {
  const double b = c.x_max();
  const double h = window / 4.0;
  if (h <= 0) throw numeric_error("endpoint_slope_right: bad window");
  const double f0 = c(b), f1 = c(b - h), f2 = c(b - 2 * h), f3 = c(b - 3 * h),
               f4 = c(b - 4 * h);
  return (25.0 * f0 - 48.0 * f1 + 36.0 * f2 - 16.0 * f3 + 3.0 * f4) /
         (12.0 * h);
}

}  // namespace fpa
