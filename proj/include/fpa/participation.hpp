#pragma once

// Shared pieces of the endogenous-participation models: information regimes,
// outcome distributions with atoms, conditional value quantiles and the
// lower-tail exponent fit.

#include <cmath>
#include <optional>
#include <vector>

#include "fpa/competition_pmf.hpp"
#include "fpa/numeric/errors.hpp"
#include "fpa/numeric/grid.hpp"
#include "fpa/value_quantile.hpp"
#include "fpa/winning_mixture.hpp"

namespace fpa {

enum class Info { KnownN, UnknownN };

// Value quantile conditional on exceeding the screening level q:
// V_q(alpha) = V(q + (1-q) alpha).
inline ValueQuantile conditional_value_quantile(const ValueQuantile& V,
                                                double q) {
  if (!(q >= 0.0 && q < 1.0))
    throw config_error("conditional value quantile: q must be in [0,1)");
  ValueQuantile out;
  auto base = V;  // copy closures
  out.eval = [base, q](double a) { return base.eval(q + (1.0 - q) * a); };
  out.v_lo = V.eval(q);
  out.v_hi = V.v_hi;
  if (V.derivative) {
    auto d = *V.derivative;
    out.derivative = [d, q](double a) {
      return (1.0 - q) * d(q + (1.0 - q) * a);
    };
  }
  return out;
}

// Law of one auction's outcome: failure and atom probabilities plus the
// distribution of the competitively sold price.
struct OutcomeDistribution {
  Info info = Info::KnownN;
  int nbar = 2;
  double q = 0.0;          // screening level F(R) or threshold s(z)
  double p_not_sold = 0.0;  // q^nbar
  double p_atom = 0.0;      // nbar q^{nbar-1} (1-q)
  double atom_price = 0.0;  // R(z) under reserve, 0 under entry

  // KnownN: binomially weighted mixture of conditional winning bids
  std::optional<WinningBidMixture> mixture;
  // UnknownN: the pooled bid quantile shared by all participants
  std::optional<BidQuantile> pooled;

  // cdf of the price given a competitive sale (at least two participants
  // under KnownN; at least one under UnknownN)
  double sold_cdf(double b) const {
    if (mixture) return mixture->cdf(b);
    const double g = pooled->cdf(b);
    const double top = std::pow(q + (1.0 - q) * g, double(nbar));
    const double p0 = std::pow(q, double(nbar));
    return (top - p0) / (1.0 - p0);
  }

  double support_lo() const {
    return mixture ? mixture->v_lo : pooled->b_lo;
  }
  double support_hi() const {
    return mixture ? mixture->b_hi : pooled->b_hi;
  }
};

// Local exponent of a cdf above its lower support bound:
// G(lo + t) ~ c t^kappa.  Fit by least squares on the log-log pairs whose
// cdf level is below fit_level; the first skip points are dropped, which
// matters for empirical cdfs where the smallest spacings are pure noise.
struct TailFit {
  double kappa = 0.0;
  std::size_t points_used = 0;
};

inline TailFit lower_tail_divergence_check(const std::vector<double>& values,
                                           const std::vector<double>& cdf,
                                           double lower_bound,
                                           double fit_level = 0.02,
                                           std::size_t skip = 1) {
  if (values.size() != cdf.size())
    throw config_error("tail fit: values and cdf sizes differ");
  std::vector<double> xs, ys;
  std::size_t seen = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(cdf[i] > 0.0) || cdf[i] > fit_level) continue;
    const double t = values[i] - lower_bound;
    if (!(t > 0.0)) continue;
    if (seen++ < skip) continue;
    xs.push_back(std::log(t));
    ys.push_back(std::log(cdf[i]));
  }
  if (xs.size() < 8)
    throw tail_error("tail fit: insufficient mass below the fit level");
  TailFit out;
  out.kappa = ls_slope(xs, ys);
  out.points_used = xs.size();
  return out;
}

// Convenience overload for a sorted sample: uses the empirical cdf m/L.
inline TailFit lower_tail_divergence_check_sample(
    const std::vector<double>& sorted, double lower_bound,
    double fit_level = 0.02, std::size_t skip = 1) {
  const std::size_t L = sorted.size();
  if (L < 50) throw tail_error("tail fit: sample too small");
  std::vector<double> u(L);
  for (std::size_t i = 0; i < L; ++i) u[i] = double(i + 1) / double(L);
  return lower_tail_divergence_check(sorted, u, lower_bound, fit_level, skip);
}

}  // namespace fpa
