#pragma once

// Two-stage entry model: buyers observe a private signal, enter when it
// clears the threshold s(z) implied by the entry cost c(z), then bid on
// values drawn from the signal-updated distribution.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "fpa/bid_quantile.hpp"
#include "fpa/numeric/quadrature.hpp"
#include "fpa/participation.hpp"
#include "fpa/reserve.hpp"

namespace fpa {

// Conditional private-value family F(v|s), nonincreasing in the signal
// threshold s for every v.  Fc is the participation-updated cdf
// Fc(v|s) = 1/(1-s) int_s^1 F(v|t) dt.
struct ConditionalFamily {
  std::function<double(double, double)> F;   // (v, s) -> F(v|s)
  std::function<double(double, double)> Fc;  // (v, s) -> Fc(v|s)
  double v_lo = 0.0;
  double v_hi = 1.0;
};

// F(v|s) = v: values independent of the signal, uniform on [0,1].
inline ConditionalFamily signal_free_uniform() {
  auto clip = [](double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); };
  ConditionalFamily fam;
  fam.F = [clip](double v, double) { return clip(v); };
  fam.Fc = [clip](double v, double) { return clip(v); };
  fam.v_lo = 0.0;
  fam.v_hi = 1.0;
  return fam;
}

// F(v|s) = v^{1 + gamma (1-s)} on [0,1].  The exponent must stay positive
// and the family nonincreasing in s, which pins gamma to (-1, 0].
inline ConditionalFamily truncated_power_family(double gamma) {
  if (!(gamma > -1.0 && gamma <= 0.0))
    throw config_error(
        "truncated power family: gamma must lie in (-1, 0] so that F(v|s) "
        "decreases in s");
  ConditionalFamily fam;
  fam.v_lo = 0.0;
  fam.v_hi = 1.0;
  fam.F = [gamma](double v, double s) {
    if (v <= 0.0) return 0.0;
    if (v >= 1.0) return 1.0;
    return std::pow(v, 1.0 + gamma * (1.0 - s));
  };
  fam.Fc = [gamma](double v, double s) {
    if (v <= 0.0) return 0.0;
    if (v >= 1.0 - 1e-12) return 1.0;
    const double e = gamma * (1.0 - s);
    if (std::abs(e) < 1e-10) return v;
    // 1/(1-s) int_s^1 v^{1+gamma(1-t)} dt in closed form
    return (std::pow(v, 1.0 + e) - v) / ((1.0 - s) * gamma * std::log(v));
  };
  return fam;
}

// Custom option: F tabulated on a value grid for each of a few signal
// levels, interpolated linearly in s; Fc by quadrature over s.
inline ConditionalFamily tabulated_family(std::vector<double> s_levels,
                                          std::vector<MonotoneCurve> cdfs) {
  if (s_levels.size() != cdfs.size() || s_levels.size() < 2)
    throw config_error("tabulated family: need >= 2 signal levels");
  auto s_ptr = std::make_shared<std::vector<double>>(std::move(s_levels));
  auto c_ptr = std::make_shared<std::vector<MonotoneCurve>>(std::move(cdfs));
  ConditionalFamily fam;
  fam.v_lo = c_ptr->front().x_min();
  fam.v_hi = c_ptr->front().x_max();
  fam.F = [s_ptr, c_ptr](double v, double s) {
    const auto& ss = *s_ptr;
    if (s <= ss.front()) return (*c_ptr).front()(v);
    if (s >= ss.back()) return (*c_ptr).back()(v);
    auto it = std::upper_bound(ss.begin(), ss.end(), s);
    const std::size_t hi = std::size_t(it - ss.begin());
    const std::size_t lo = hi - 1;
    const double w = (s - ss[lo]) / (ss[hi] - ss[lo]);
    return (1.0 - w) * (*c_ptr)[lo](v) + w * (*c_ptr)[hi](v);
  };
  auto F = fam.F;
  fam.Fc = [F](double v, double s) {
    if (s >= 1.0 - 1e-12) return F(v, 1.0);
    auto f = [&](double t) { return F(v, t); };
    return composite_gl(f, uniform_breaks(8, s, 1.0)) / (1.0 - s);
  };
  return fam;
}

struct EntryModel {
  ConditionalFamily family;
  int n_potential = 2;                    // nbar
  std::function<double(double)> cost_fn;  // z -> c(z)
  Info info = Info::KnownN;
};

// First-stage expected profit Pi_nbar(S; s) of a buyer with signal S when
// everyone else enters above s.  The integral runs from 0, so a positive
// lower support bound contributes a flat strip.
inline double entry_profit(const ConditionalFamily& fam, int nbar, double S,
                           double s) {
  auto f = [&](double v) {
    return (1.0 - fam.F(v, S)) *
           std::pow(s + (1.0 - s) * fam.Fc(v, s), double(nbar - 1));
  };
  double strip = 0.0;
  if (fam.v_lo > 0.0)
    strip = fam.v_lo * std::pow(s, double(nbar - 1));
  return strip + composite_gl(f, uniform_breaks(16, fam.v_lo, fam.v_hi));
}

struct ThresholdResult {
  enum class Status { Interior, AllEnter, NoneEnter };
  double s = 0.0;
  Status status = Status::Interior;
  bool break_even_monotone = true;  // diagnostic on the probe grid
};

// Solve the break-even condition Pi(s;s) = c(z) for the entry threshold.
// Bracketing on a 64-point probe grid, then bisection to 1e-10; continuity
// of the break-even map is guaranteed, monotonicity is only diagnosed.
inline ThresholdResult entry_threshold(const EntryModel& m, double z) {
  const double c = m.cost_fn(z);
  const int nbar = m.n_potential;
  auto pi = [&](double s) { return entry_profit(m.family, nbar, s, s); };

  ThresholdResult out;
  const double lo = pi(0.0), hi = pi(1.0);
  if (c <= lo + 1e-12) {
    out.s = 0.0;
    out.status = ThresholdResult::Status::AllEnter;
    return out;
  }
  if (c >= hi - 1e-12) {
    out.s = 1.0;
    out.status = ThresholdResult::Status::NoneEnter;
    return out;
  }

  constexpr int kProbe = 64;
  double prev_s = 0.0, prev_v = lo;
  double bracket_lo = -1.0, bracket_hi = -1.0;
  for (int i = 1; i <= kProbe; ++i) {
    const double s = double(i) / double(kProbe);
    const double v = pi(s);
    if (v < prev_v) out.break_even_monotone = false;
    if (bracket_lo < 0.0 && (prev_v - c) * (v - c) <= 0.0) {
      bracket_lo = prev_s;
      bracket_hi = s;
    }
    prev_s = s;
    prev_v = v;
  }
  if (bracket_lo < 0.0)
    throw numeric_error("entry threshold: no bracket found on probe grid");
  double a = bracket_lo, b = bracket_hi;
  double fa = pi(a) - c;
  while (b - a > 1e-10) {
    const double mid = 0.5 * (a + b);
    const double fm = pi(mid) - c;
    if ((fa <= 0.0) == (fm <= 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  out.s = 0.5 * (a + b);
  return out;
}

// Participation-updated value quantile Vc(.|s) = Fc^{-1}(.|s), tabulated
// once on a clustered grid and wrapped as a smooth quantile object.
inline ValueQuantile entry_value_quantile(const ConditionalFamily& fam,
                                          double s,
                                          std::size_t nodes = 2001) {
  auto grid = chebyshev_grid(nodes);
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double target = grid[i];
    double a = fam.v_lo, b = fam.v_hi;
    for (int it = 0; it < 200 && (b - a) > 1e-13 * (fam.v_hi - fam.v_lo);
         ++it) {
      const double mid = 0.5 * (a + b);
      (fam.Fc(mid, s) < target ? a : b) = mid;
    }
    vals[i] = 0.5 * (a + b);
  }
  vals.front() = fam.v_lo;
  vals.back() = fam.v_hi;
  for (std::size_t i = 1; i < vals.size(); ++i)
    if (vals[i] <= vals[i - 1])
      throw numeric_error("entry value quantile: inversion not increasing");
  return value_from_tabulation(std::move(grid), std::move(vals));
}

inline BidQuantile entry_bid_known(const EntryModel& m, int n, double z,
                                   const std::vector<double>& grid) {
  if (m.info != Info::KnownN)
    throw config_error("entry_bid_known: model is not KnownN");
  const double s = entry_threshold(m, z).s;
  return bid_quantile_from_value(entry_value_quantile(m.family, s), n, 1.0,
                                 grid);
}

inline BidQuantile entry_bid_unknown(const EntryModel& m, double z,
                                     const std::vector<double>& grid) {
  if (m.info != Info::UnknownN)
    throw config_error("entry_bid_unknown: model is not UnknownN");
  const double s = entry_threshold(m, z).s;
  return detail::pooled_bid_unknown(entry_value_quantile(m.family, s),
                                    m.n_potential, s, grid);
}

inline OutcomeDistribution outcome_distribution(
    const EntryModel& m, double z, const std::vector<double>& grid) {
  const auto th = entry_threshold(m, z);
  if (th.status != ThresholdResult::Status::Interior)
    throw config_error("outcome distribution: threshold not interior");
  const double s = th.s;
  const int nbar = m.n_potential;
  OutcomeDistribution out;
  out.info = m.info;
  out.nbar = nbar;
  out.q = s;
  out.p_not_sold = std::pow(s, nbar);
  out.p_atom = double(nbar) * std::pow(s, nbar - 1) * (1.0 - s);
  out.atom_price = 0.0;
  if (m.info == Info::KnownN) {
    out.mixture =
        winning_bid_mixture(entry_value_quantile(m.family, s),
                            binomial_conditional_pmf(nbar, s), 1.0, grid);
  } else {
    out.pooled = entry_bid_unknown(m, z, grid);
  }
  return out;
}

// Entry cost implied by recovered primitives through the break-even
// condition; F and Fc are the (possibly estimated) conditional cdfs at the
// recovered threshold.
inline double cost_from_primitives(
    const std::function<double(double)>& F_at_s,
    const std::function<double(double)>& Fc_at_s, double s, int nbar,
    double v_lo, double v_hi) {
  auto f = [&](double v) {
    return (1.0 - F_at_s(v)) *
           std::pow(s + (1.0 - s) * Fc_at_s(v), double(nbar - 1));
  };
  double strip = 0.0;
  if (v_lo > 0.0) strip = v_lo * std::pow(s, double(nbar - 1));
  return strip + composite_gl(f, uniform_breaks(16, v_lo, v_hi));
}

}  // namespace fpa
