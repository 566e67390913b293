#pragma once

// Equilibrium bid quantile functions and the two mappings between value and
// bid quantiles.  The CRRA exponent theta enters only through the effective
// number of opponents (n-1)/theta; theta = 1 is the risk-neutral case and
// shares the same code path bit for bit.

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "fpa/numeric/errors.hpp"
#include "fpa/numeric/grid.hpp"
#include "fpa/numeric/quadrature.hpp"
#include "fpa/value_quantile.hpp"

namespace fpa {

struct BidQuantile {
  int n = 2;
  double theta = 1.0;
  std::vector<double> grid;    // quantile levels, strictly increasing, [0,1]
  std::vector<double> values;  // B(alpha) at the grid nodes
  MonotoneCurve curve;         // monotone interpolant of the tabulation
  double b_lo = 0.0;           // B(0)
  double b_hi = 0.0;           // B(1)

  double operator()(double a) const { return curve(a); }
  double deriv(double a) const { return curve.derivative(a); }
  // conditional bid cdf G_n = B_n^{-1}
  double cdf(double b) const {
    if (b <= b_lo) return 0.0;
    if (b >= b_hi) return 1.0;
    return curve.inverse(b, 1e-10);
  }
  // conditional bid pdf g_n(b) = 1 / B_n'(G_n(b)) on [b_lo, b_hi]
  double pdf(double b) const {
    if (b < b_lo || b > b_hi) return 0.0;
    return 1.0 / curve.derivative(cdf(b));
  }
};

namespace detail {

// effective number of opponents
inline double crra_power(int n, double theta) {
  if (n < 2) throw config_error("bid quantile: n must be >= 2");
  if (!(theta > 0.0 && theta <= 1.0))
    throw config_error("bid quantile: theta must be in (0,1]");
  return double(n - 1) / theta;
}

// one-sided slope of V at 0, used by the small-alpha expansion; infinity
// signals a diverging slope (f(v_lo) = 0), for which the expansion is invalid
inline double value_slope_at_zero(const ValueQuantile& V) {
  if (V.derivative) {
    const double d = (*V.derivative)(0.0);
    if (std::isnan(d)) throw numeric_error("bid quantile: V'(0) is NaN");
    return d;
  }
  const double h = 1e-6;
  const double s1 = (V.eval(h) - V.eval(0.0)) / h;
  const double s2 = (V.eval(h / 4) - V.eval(0.0)) / (h / 4);
  if (s2 > 1.5 * s1) return std::numeric_limits<double>::infinity();
  return s1;
}

}  // namespace detail

// B_n(alpha) = c * alpha^{-c} * int_0^alpha t^{c-1} V(t) dt with
// c = (n-1)/theta.  The substitution t = alpha s^2 turns the integral into
// 2c int_0^1 s^{2c-1} V(alpha s^2) ds, which removes the alpha-dependent
// domain and flattens square-root-type behaviour of V at 0.  Below
// alpha = 1e-4 the expansion B_n(alpha) = V(0) + c/(c+1) V'(0) alpha is used.
inline double bid_quantile_eval(const ValueQuantile& V, int n, double theta,
                                double alpha) {
  const double c = detail::crra_power(n, theta);
  if (alpha <= 0.0) return V.v_lo;
  if (alpha < 1e-4) {
    const double slope = detail::value_slope_at_zero(V);
    if (std::isfinite(slope)) return V.v_lo + c / (c + 1.0) * slope * alpha;
    // diverging V'(0): fall through to the substituted quadrature, which
    // stays accurate down to alpha = 0
  }
  auto integrand = [&](double s) {
    return std::pow(s, 2.0 * c - 1.0) * V.eval(alpha * s * s);
  };
  const double val = 2.0 * c * composite_gl(integrand, uniform_breaks(8, 0.0, 1.0));
  if (!std::isfinite(val))
    throw numeric_error("bid quantile: quadrature failed at alpha=" +
                        std::to_string(alpha));
  return val;
}

inline BidQuantile bid_quantile_from_value(const ValueQuantile& V, int n,
                                           double theta,
                                           const std::vector<double>& grid) {
  if (grid.size() < 200 || grid.front() != 0.0 || grid.back() != 1.0)
    throw config_error(
        "bid quantile: grid must cover [0,1] with >= 200 nodes");
  validate_value_quantile(V, grid);  // rejects non-monotone V

  BidQuantile B;
  B.n = n;
  B.theta = theta;
  B.grid = grid;
  B.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    B.values[i] = bid_quantile_eval(V, n, theta, grid[i]);
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(B.values[i] > B.values[i - 1]))
      throw numeric_error("bid quantile: tabulation not strictly increasing");
  B.b_lo = B.values.front();
  B.b_hi = B.values.back();
  if (!(B.b_hi < V.v_hi))
    throw numeric_error("bid quantile: upper bound not below V(1)");
  B.curve = MonotoneCurve(B.grid, B.values);
  return B;
}

// Inverse mapping: V(alpha) = B(alpha) + theta * alpha * B'(alpha) / (n-1),
// with B' from local-quadratic differencing on the tabulation grid.  The
// recovered tabulation can be non-monotone, which is the signal that the bid
// quantile is not compatible with any equilibrium.
struct ValueFromBid {
  std::vector<double> grid;
  std::vector<double> values;
  bool increasing = false;
};

inline ValueFromBid value_tabulation_from_bid(const BidQuantile& B) {
  ValueFromBid out;
  out.grid = B.grid;
  out.values.resize(B.grid.size());
  const double scale = B.theta / double(B.n - 1);
  for (std::size_t i = 0; i < B.grid.size(); ++i) {
    const double d = deriv3(B.grid, B.values, i);
    out.values[i] = B.values[i] + scale * B.grid[i] * d;
  }
  out.increasing = true;
  for (std::size_t i = 1; i < out.values.size(); ++i)
    if (!(out.values[i] > out.values[i - 1])) {
      out.increasing = false;
      break;
    }
  return out;
}

inline ValueQuantile value_from_bid_quantile(const BidQuantile& B) {
  ValueFromBid tab = value_tabulation_from_bid(B);
  if (!tab.increasing)
    throw diagnostics_error(
        "incompatible bid quantile: recovered value quantile is not "
        "monotone");
  return value_from_tabulation(std::move(tab.grid), std::move(tab.values));
}

// Cross-equation restriction: every conditional bid quantile must map back to
// one and the same value quantile.
struct CompatibilityReport {
  double max_discrepancy = 0.0;
  bool all_increasing = true;
  bool compatible = false;
  double tolerance = 1e-3;
};

inline CompatibilityReport compatibility_check(
    const std::vector<BidQuantile>& bids, double tol = 1e-3) {
  if (bids.size() < 2)
    throw config_error("compatibility check: need >= 2 bid quantiles");
  for (std::size_t i = 1; i < bids.size(); ++i)
    if (bids[i].grid != bids[0].grid)
      throw config_error("compatibility check: bid quantiles must share a grid");

  CompatibilityReport rep;
  rep.tolerance = tol;
  std::vector<ValueFromBid> vs;
  vs.reserve(bids.size());
  for (const auto& b : bids) {
    vs.push_back(value_tabulation_from_bid(b));
    rep.all_increasing = rep.all_increasing && vs.back().increasing;
  }
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j)
      for (std::size_t k = 0; k < vs[i].values.size(); ++k)
        rep.max_discrepancy = std::max(
            rep.max_discrepancy, std::abs(vs[i].values[k] - vs[j].values[k]));
  rep.compatible = rep.all_increasing && rep.max_discrepancy < tol;
  return rep;
}

}  // namespace fpa
