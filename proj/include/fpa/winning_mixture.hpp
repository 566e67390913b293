#pragma once

// Winning-bid mixture G = sum_n p_n G_n^n, its density and the jump sizes at
// the conditional bid upper bounds.

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "fpa/bid_quantile.hpp"
#include "fpa/competition_pmf.hpp"
#include "fpa/numeric/errors.hpp"
#include "fpa/value_quantile.hpp"

namespace fpa {

struct JumpPoint {
  int n = 0;            // mixture component producing the jump
  double location = 0;  // b_bar_n
  double size = 0;      // density drop at the location
};

struct WinningBidMixture {
  CompetitionPMF pmf;
  std::vector<BidQuantile> bids;  // one per n = n_lo..n_hi
  std::vector<JumpPoint> jump_points;
  double v_lo = 0.0;  // lower support bound V(0)
  double v_hi = 0.0;  // value upper bound V(1)
  double b_hi = 0.0;  // support upper bound b_bar_{n_hi}

  double cdf(double b) const {
    if (b <= v_lo) return 0.0;
    if (b >= b_hi) return 1.0;
    double s = 0.0;
    for (std::size_t i = 0; i < bids.size(); ++i)
      s += pmf.weights[i] *
           std::pow(bids[i].cdf(b), double(pmf.n_lo + int(i)));
    return s;
  }

  double pdf(double b) const {
    if (b <= v_lo || b > b_hi) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < bids.size(); ++i) {
      const auto& B = bids[i];
      if (b > B.b_hi) continue;
      const int k = pmf.n_lo + int(i);
      s += pmf.weights[i] * double(k) * std::pow(B.cdf(b), double(k - 1)) *
           B.pdf(b);
    }
    return s;
  }
};

inline WinningBidMixture winning_bid_mixture(const ValueQuantile& V,
                                             const CompetitionPMF& pmf,
                                             double theta,
                                             const std::vector<double>& grid) {
  WinningBidMixture m;
  m.pmf = pmf;
  m.v_lo = V.v_lo;
  m.v_hi = V.v_hi;
  for (int n = pmf.n_lo; n <= pmf.n_hi; ++n)
    m.bids.push_back(bid_quantile_from_value(V, n, theta, grid));
  m.b_hi = m.bids.back().b_hi;
  for (std::size_t i = 0; i < m.bids.size(); ++i) {
    const int n = pmf.n_lo + int(i);
    const double b_bar = m.bids[i].b_hi;
    // g_n at its upper bound in closed form, so the jump sizes are exact
    const double gn_top = theta / (double(n - 1) * (V.v_hi - b_bar));
    JumpPoint jp;
    jp.n = n;
    jp.location = b_bar;
    jp.size = double(n) * pmf.weights[i] * gn_top;
    m.jump_points.push_back(jp);
  }
  return m;
}

// Closed-form conditional bid density at the two support ends.
// Lower: g_n(v_lo) = (c+1)/c * f(v_lo) with c = (n-1)/theta, where
// f(v_lo) = 1/V'(0); a diverging V'(0) means f(v_lo) = 0.
// Upper: g_n(b_bar_n) = theta / ((n-1)(v_hi - b_bar_n)).
inline std::pair<double, double> boundary_densities(const ValueQuantile& V,
                                                    int n,
                                                    double theta = 1.0) {
  const double c = detail::crra_power(n, theta);
  double d0;
  if (V.derivative) {
    d0 = (*V.derivative)(0.0);
    if (std::isnan(d0)) throw numeric_error("boundary densities: V'(0) is NaN");
  } else {
    const double h = 1e-6;
    const double s1 = (V.eval(h) - V.eval(0.0)) / h;
    const double s2 = (V.eval(h / 4) - V.eval(0.0)) / (h / 4);
    d0 = (s2 > 1.5 * s1) ? std::numeric_limits<double>::infinity() : s1;
  }
  if (!(d0 > 0.0)) throw numeric_error("boundary densities: V'(0) <= 0");
  const double f_lo = std::isinf(d0) ? 0.0 : 1.0 / d0;
  const double g_lower = (c + 1.0) / c * f_lo;

  double d1;
  if (V.derivative) {
    d1 = (*V.derivative)(1.0);
  } else {
    const double h = 1e-6;
    d1 = (V.eval(1.0) - V.eval(1.0 - h)) / h;
  }
  if (!std::isfinite(d1) || !(d1 > 0.0))
    throw numeric_error("boundary densities: V'(1) not finite and positive");
  const double b_bar = bid_quantile_eval(V, n, theta, 1.0);
  const double g_upper = theta / (double(n - 1) * (V.v_hi - b_bar));
  return {g_lower, g_upper};
}

// Lower-tail log-log slope of a cdf: the population analog of the smallest
// mixture order.  Fits log G(v_lo + t) against log t by least squares over
// the smallest offsets of the supplied grid.
template <class Cdf>
double tail_exponent_of_cdf(const Cdf& G, double v_lo,
                            const std::vector<double>& t_grid) {
  std::vector<double> xs, ys;
  for (double t : t_grid) {
    if (!(t > 0.0)) throw config_error("tail exponent: offsets must be > 0");
    const double g = G(v_lo + t);
    if (g > 0.0 && std::isfinite(g)) {
      xs.push_back(std::log(t));
      ys.push_back(std::log(g));
    }
  }
  if (xs.size() < 2)
    throw tail_error("tail exponent: cdf vanishes on the whole offset grid");
  // keep the smallest half of the usable offsets (at least 4 when available)
  std::vector<std::size_t> idx(xs.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::size_t keep = std::max<std::size_t>(std::min<std::size_t>(4, xs.size()),
                                           xs.size() / 2);
  std::vector<double> fx, fy;
  for (std::size_t i = 0; i < keep; ++i) {
    fx.push_back(xs[idx[i]]);
    fy.push_back(ys[idx[i]]);
  }
  return ls_slope(fx, fy);
}

}  // namespace fpa
