#pragma once

// First-price auction with a binding reserve price R(z).  Participants are
// the buyers whose value clears R; their count is binomial, and bids follow
// either the per-n best response (participation observed) or the pooled one
// (participation unknown).

#include <cmath>
#include <functional>
#include <vector>

#include "fpa/bid_quantile.hpp"
#include "fpa/numeric/quadrature.hpp"
#include "fpa/participation.hpp"

namespace fpa {

struct ReserveModel {
  ValueQuantile V;
  int n_potential = 2;                      // nbar
  std::function<double(double)> reserve_fn;  // z -> R(z) in (v_lo, v_hi)
  Info info = Info::KnownN;
};

// screening level q(z) = F(R(z)), by inverting V on [0,1]
inline double screening_level(const ReserveModel& m, double z) {
  const double R = m.reserve_fn(z);
  if (!(R > m.V.v_lo && R < m.V.v_hi))
    throw config_error("reserve model: R(z) outside (v_lo, v_hi)");
  double a = 0.0, b = 1.0;
  for (int i = 0; i < 200 && (b - a) > 1e-14; ++i) {
    const double mid = 0.5 * (a + b);
    (m.V.eval(mid) < R ? a : b) = mid;
  }
  return 0.5 * (a + b);
}

inline BidQuantile reserve_bid_known(const ReserveModel& m, int n, double z,
                                     const std::vector<double>& grid) {
  if (m.info != Info::KnownN)
    throw config_error("reserve_bid_known: model is not KnownN");
  const double q = screening_level(m, z);
  return bid_quantile_from_value(conditional_value_quantile(m.V, q), n, 1.0,
                                 grid);
}

namespace detail {

// Pooled bid quantile under unknown participation:
// B(alpha) = Vq(alpha) - int_0^alpha ((q+(1-q)t)/(q+(1-q)alpha))^{nbar-1}
//            Vq'(t) dt,
// tabulated on the grid.  Vq is the conditional value quantile with lower
// bound R (reserve) or v_lo (entry, q = s(z)).
inline BidQuantile pooled_bid_unknown(const ValueQuantile& Vq, int nbar,
                                      double q,
                                      const std::vector<double>& grid) {
  if (nbar < 2) throw config_error("pooled bid: nbar must be >= 2");
  if (!(q > 0.0 && q < 1.0)) throw config_error("pooled bid: q not in (0,1)");
  validate_value_quantile(Vq, grid);
  auto dV = [&](double t) { return Vq.deriv(t); };

  BidQuantile B;
  B.n = nbar;
  B.theta = 1.0;
  B.grid = grid;
  B.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double a = grid[i];
    if (a == 0.0) {
      B.values[i] = Vq.v_lo;
      continue;
    }
    const double denom = q + (1.0 - q) * a;
    auto f = [&](double u) {
      const double t = a * u;
      return a * std::pow((q + (1.0 - q) * t) / denom, double(nbar - 1)) *
             dV(t);
    };
    B.values[i] = Vq.eval(a) - composite_gl(f, uniform_breaks(8, 0.0, 1.0));
    if (!std::isfinite(B.values[i]))
      throw numeric_error("pooled bid: quadrature failed");
  }
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(B.values[i] > B.values[i - 1]))
      throw numeric_error("pooled bid: tabulation not strictly increasing");
  B.b_lo = B.values.front();
  B.b_hi = B.values.back();
  B.curve = MonotoneCurve(B.grid, B.values);
  return B;
}

}  // namespace detail

inline BidQuantile reserve_bid_unknown(const ReserveModel& m, double z,
                                       const std::vector<double>& grid) {
  if (m.info != Info::UnknownN)
    throw config_error("reserve_bid_unknown: model is not UnknownN");
  const double q = screening_level(m, z);
  return detail::pooled_bid_unknown(conditional_value_quantile(m.V, q),
                                    m.n_potential, q, grid);
}

inline OutcomeDistribution outcome_distribution(
    const ReserveModel& m, double z, const std::vector<double>& grid) {
  const double q = screening_level(m, z);
  const int nbar = m.n_potential;
  OutcomeDistribution out;
  out.info = m.info;
  out.nbar = nbar;
  out.q = q;
  out.p_not_sold = std::pow(q, nbar);
  out.p_atom = double(nbar) * std::pow(q, nbar - 1) * (1.0 - q);
  out.atom_price = m.reserve_fn(z);
  if (m.info == Info::KnownN) {
    out.mixture =
        winning_bid_mixture(conditional_value_quantile(m.V, q),
                            binomial_conditional_pmf(nbar, q), 1.0, grid);
  } else {
    out.pooled = reserve_bid_unknown(m, z, grid);
  }
  return out;
}

}  // namespace fpa
