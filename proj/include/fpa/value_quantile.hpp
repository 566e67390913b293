#pragma once

// Private-value quantile function V on [0,1], the model primitive.

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "fpa/numeric/errors.hpp"
#include "fpa/numeric/grid.hpp"

namespace fpa {

struct ValueQuantile {
  std::function<double(double)> eval;
  double v_lo = 0.0;  // V(0)
  double v_hi = 1.0;  // V(1)
  std::optional<std::function<double(double)>> derivative;

  double operator()(double a) const { return eval(a); }

  // V'(a); central finite difference when no analytic derivative is attached
  double deriv(double a) const {
    if (derivative) return (*derivative)(a);
    const double h = 1e-6;
    const double lo = std::max(0.0, a - h);
    const double hi = std::min(1.0, a + h);
    return (eval(hi) - eval(lo)) / (hi - lo);
  }
};

inline ValueQuantile make_value_quantile(
    std::function<double(double)> f,
    std::optional<std::function<double(double)>> df = std::nullopt) {
  ValueQuantile v;
  v.v_lo = f(0.0);
  v.v_hi = f(1.0);
  v.eval = std::move(f);
  v.derivative = std::move(df);
  return v;
}

inline ValueQuantile value_from_tabulation(std::vector<double> alphas,
                                           std::vector<double> values) {
  auto curve =
      std::make_shared<MonotoneCurve>(std::move(alphas), std::move(values));
  ValueQuantile v;
  v.v_lo = curve->y_min();
  v.v_hi = curve->y_max();
  v.eval = [curve](double a) { return (*curve)(a); };
  v.derivative = [curve](double a) { return curve->derivative(a); };
  return v;
}

// Checks the invariants on a test grid: strict increase, bounds, and (when
// supplied) agreement of the analytic derivative with a central difference
// on an interior grid.
inline void validate_value_quantile(const ValueQuantile& v,
                                    const std::vector<double>& grid,
                                    double deriv_tol = 1e-3) {
  double prev = v.eval(grid.front());
  if (!std::isfinite(prev)) throw numeric_error("value quantile: non-finite");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur = v.eval(grid[i]);
    if (!std::isfinite(cur)) throw numeric_error("value quantile: non-finite");
    if (!(cur > prev))
      throw config_error("value quantile not strictly increasing on grid");
    prev = cur;
  }
  for (double a : grid) {
    const double val = v.eval(a);
    if (val < v.v_lo - 1e-12 || val > v.v_hi + 1e-12)
      throw config_error("value quantile leaves [v_lo, v_hi]");
  }
  if (v.derivative) {
    for (double a : grid) {
      if (a < 0.05 || a > 0.95) continue;
      const double d = (*v.derivative)(a);
      if (!(d > 0.0))
        throw config_error("value quantile derivative not strictly positive");
      const double h = 1e-5;
      const double fd = (v.eval(a + h) - v.eval(a - h)) / (2.0 * h);
      const double scale = std::max(1.0, std::abs(d));
      if (std::abs(fd - d) > deriv_tol * scale)
        throw config_error(
            "value quantile derivative disagrees with finite difference");
    }
  }
}

}  // namespace fpa
