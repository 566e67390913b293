#pragma once

// Tail-index estimation of the smallest number of active bidders from
// normalized winning bids, plus the covariate-based subsample splits.
//
// Normalization: each winning bid is divided by a lower-bound estimate for
// its covariate cell (per-bid minima when bid columns exist), rescaled by
// the smallest ratio and shifted by -1, so the smallest normalized value is
// exactly zero and drops out of the order statistics.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "fpa/numeric/errors.hpp"
#include "fpa/outcome.hpp"

namespace fpa {

struct HillConfig {
  int M_lo = 0;       // 0: default ceil(0.1 L)
  int M_hi = 0;       // 0: default ceil(0.3 L)
  int K = 2;          // covariate-quantile grid per axis
  bool use_covariates = false;
  // The printed estimator omits the logarithm inside the spacing sum; kept
  // behind a flag for comparison, the log version is the estimator.
  bool literal_formula = false;
};

struct HillResult {
  std::vector<int> Ms;
  std::vector<double> n_tilde;  // trace over M
  int n_hat = 0;                // modal rounded value over the trace
};

// rounding rule: n_hat = k exactly when k - 1/2 < n_tilde <= k + 1/2
inline int round_half_down(double x) {
  return int(std::ceil(x - 0.5));
}

namespace detail {

inline double sample_quantile(std::vector<double> v, double p) {
  if (v.empty()) throw data_error("sample quantile of empty vector");
  std::sort(v.begin(), v.end());
  const double h = p * double(v.size() - 1);
  const std::size_t i = std::size_t(h);
  if (i + 1 >= v.size()) return v.back();
  return v[i] + (h - double(i)) * (v[i + 1] - v[i]);
}

}  // namespace detail

inline HillResult hill_n_lower(const OutcomeSample& sample,
                               const HillConfig& cfg = {}) {
  std::vector<const OutcomeRecord*> recs;
  for (const auto& r : sample.records)
    if (r.status == OutcomeRecord::Status::SoldCompetitive)
      recs.push_back(&r);
  if (recs.size() < 20) throw data_error("hill estimator: too few winning bids");

  // lower-bound normalization per covariate cell
  std::vector<double> vhat(recs.size());
  if (cfg.use_covariates) {
    if (cfg.K < 1) throw config_error("hill estimator: K must be >= 1");
    for (const auto* r : recs)
      if (r->covariates.size() < 2 || r->bids.empty())
        throw data_error(
            "hill estimator: covariate cells need x1, x2 and bid columns");
    std::vector<double> x1, x2;
    for (const auto* r : recs) {
      x1.push_back(r->covariates[0]);
      x2.push_back(r->covariates[1]);
    }
    std::vector<double> q1(std::size_t(cfg.K) + 1), q2(std::size_t(cfg.K) + 1);
    for (int k = 0; k <= cfg.K; ++k) {
      q1[std::size_t(k)] = detail::sample_quantile(x1, double(k) / cfg.K);
      q2[std::size_t(k)] = detail::sample_quantile(x2, double(k) / cfg.K);
    }
    auto cell_of = [&](const OutcomeRecord* r) {
      auto bin = [&](double x, const std::vector<double>& q) {
        int c = 0;
        while (c + 1 < cfg.K && x > q[std::size_t(c + 1)]) ++c;
        return c;
      };
      return bin(r->covariates[0], q1) * cfg.K + bin(r->covariates[1], q2);
    };
    std::map<int, double> cell_min;
    std::map<int, int> cell_count;
    double global_min = std::numeric_limits<double>::infinity();
    for (const auto* r : recs) {
      const int c = cell_of(r);
      double m = *std::min_element(r->bids.begin(), r->bids.end());
      auto it = cell_min.find(c);
      if (it == cell_min.end() || m < it->second) cell_min[c] = m;
      cell_count[c] += 1;
      global_min = std::min(global_min, m);
    }
    for (std::size_t i = 0; i < recs.size(); ++i) {
      const int c = cell_of(recs[i]);
      // thin cells fall back to the global minimum
      vhat[i] = cell_count[c] >= 2 ? cell_min[c] : global_min;
    }
  } else {
    double m = std::numeric_limits<double>::infinity();
    for (const auto* r : recs) {
      if (!r->bids.empty())
        m = std::min(m, *std::min_element(r->bids.begin(), r->bids.end()));
      else
        m = std::min(m, r->winning_bid);
    }
    if (!(m > 0.0) && m != 0.0)
      throw data_error("hill estimator: bad minimum bid");
    std::fill(vhat.begin(), vhat.end(), m != 0.0 ? m : 1.0);
  }

  std::vector<double> ratio(recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i)
    ratio[i] = recs[i]->winning_bid / vhat[i];
  const double rmin = *std::min_element(ratio.begin(), ratio.end());
  std::vector<double> wd;
  wd.reserve(ratio.size());
  for (double r : ratio) wd.push_back(r / rmin - 1.0);
  std::sort(wd.begin(), wd.end());
  // W_(1) = 0 by construction; order statistics start at m = 2
  std::vector<double> pos(wd.begin() + 1, wd.end());
  while (!pos.empty() && pos.front() <= 0.0) pos.erase(pos.begin());
  const int L = int(recs.size());
  int M_lo = cfg.M_lo > 0 ? cfg.M_lo : int(std::ceil(0.1 * L));
  int M_hi = cfg.M_hi > 0 ? cfg.M_hi : int(std::ceil(0.3 * L));
  M_lo = std::max(M_lo, 2);
  M_hi = std::min<int>(M_hi, int(pos.size()) + 1);
  if (M_hi < M_lo)
    throw data_error("hill estimator: fewer positive normalized bids than M");

  // prefix sums over ln W_(m), m = 2..; pos[j] is W_(j+2)
  std::vector<double> pref(pos.size() + 1, 0.0);
  for (std::size_t j = 0; j < pos.size(); ++j) {
    const double term = cfg.literal_formula ? pos[j] : std::log(pos[j]);
    pref[j + 1] = pref[j] + term;
  }

  HillResult out;
  std::map<int, int> votes;
  for (int M = M_lo; M <= M_hi; ++M) {
    // entries m = 2..M are pos[0..M-2]
    const double mean = pref[std::size_t(M - 1)] / double(M - 1);
    const double inv = std::log(pos[std::size_t(M - 2)]) - mean;
    if (!(inv > 0.0)) throw data_error("hill estimator: zero log spread");
    const double nt = 1.0 / inv;
    out.Ms.push_back(M);
    out.n_tilde.push_back(nt);
    votes[round_half_down(nt)] += 1;
  }
  int best = 0, best_count = -1;
  for (auto& [k, c] : votes)
    if (c > best_count) {
      best = k;
      best_count = c;
    }
  out.n_hat = best;
  return out;
}

// Covariate-based subsamples as index lists into the record vector:
// Low  = both covariates strictly below their medians,
// Medium = both within the central [25%, 75%] band (inclusive),
// High = both strictly above their medians.  Membership may overlap.
struct SubsampleSplit {
  std::vector<std::size_t> low, medium, high;
};

inline SubsampleSplit subsample_split(const OutcomeSample& sample) {
  std::vector<double> x1, x2;
  for (const auto& r : sample.records) {
    if (r.covariates.size() < 2)
      throw data_error("subsample split: records need two covariates");
    x1.push_back(r.covariates[0]);
    x2.push_back(r.covariates[1]);
  }
  if (x1.empty()) throw data_error("subsample split: empty sample");
  const double m1 = detail::sample_quantile(x1, 0.5);
  const double m2 = detail::sample_quantile(x2, 0.5);
  const double l1 = detail::sample_quantile(x1, 0.25);
  const double l2 = detail::sample_quantile(x2, 0.25);
  const double h1 = detail::sample_quantile(x1, 0.75);
  const double h2 = detail::sample_quantile(x2, 0.75);
  SubsampleSplit out;
  for (std::size_t i = 0; i < sample.records.size(); ++i) {
    const double a = x1[i], b = x2[i];
    if (a < m1 && b < m2) out.low.push_back(i);
    if (a >= l1 && a <= h1 && b >= l2 && b <= h2) out.medium.push_back(i);
    if (a > m1 && b > m2) out.high.push_back(i);
  }
  return out;
}

}  // namespace fpa
