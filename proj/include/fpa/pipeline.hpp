#pragma once

// End-to-end composition: raw winning bids -> smoothed empirical cdf ->
// detected discontinuities -> competition estimate -> recovered value
// quantile, with every intermediate artifact kept for inspection.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "fpa/competition_estimate.hpp"
#include "fpa/hill.hpp"
#include "fpa/jump_detect.hpp"
#include "fpa/outcome.hpp"
#include "fpa/recovery.hpp"

namespace fpa {

struct PipelineOptions {
  DetectionConfig detection;
  int n_lo = 0;  // 0: take the rounded Hill estimate
  HillConfig hill;
  double theta = 1.0;
  RecoveryOptions recovery;
  std::size_t min_sample = 500;
  std::size_t ecdf_nodes = 512;
};

struct PipelineResult {
  JumpSet jumps;
  CompetitionEstimate estimate;
  std::optional<HillResult> hill;
  RecoveredValue recovered;
  CdfTabulation ecdf;
};

// Empirical winning-bid cdf thinned to ~nodes support points.  Each node
// averages one block of order statistics (a mild pre-smoother that keeps
// monotonicity); jump locations enter as exact nodes and block boundaries,
// so the segment split lands on sample points and blocks never straddle a
// discontinuity.
inline CdfTabulation empirical_cdf_tabulation(std::vector<double> sorted,
                                              const std::vector<Jump>& jumps,
                                              std::size_t nodes) {
  const std::size_t L = sorted.size();
  std::vector<std::size_t> bounds;  // block boundaries, 0-based exclusive end
  for (std::size_t j = 1; j < nodes; ++j)
    bounds.push_back(std::size_t(double(j) * double(L) / double(nodes)));
  for (const auto& j : jumps)
    if (j.index >= 1 && j.index < L) bounds.push_back(j.index);
  bounds.push_back(L);
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());

  CdfTabulation tab;
  auto push = [&](double b, double u) {
    if (!tab.b.empty() && !(b > tab.b.back())) return;
    tab.b.push_back(b);
    tab.u.push_back(u);
  };
  push(sorted.front(), 1.0 / double(L));
  std::size_t start = 0;
  for (std::size_t end : bounds) {
    if (end <= start) continue;
    double mean = 0.0;
    for (std::size_t i = start; i < end; ++i) mean += sorted[i];
    mean /= double(end - start);
    push(mean, 0.5 * double(start + end) / double(L));
    start = end;
  }
  for (const auto& j : jumps)
    if (j.index >= 1 && j.index <= L) push(sorted[j.index - 1],
                                           double(j.index) / double(L));
  push(sorted.back(), 1.0);
  // the exact jump nodes were appended; restore ordering
  std::vector<std::size_t> perm(tab.b.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return tab.b[a] < tab.b[b];
  });
  CdfTabulation out;
  for (std::size_t i : perm) {
    if (!out.b.empty() &&
        (!(tab.b[i] > out.b.back()) || !(tab.u[i] > out.u.back())))
      continue;
    out.b.push_back(tab.b[i]);
    out.u.push_back(tab.u[i]);
  }
  return out;
}

inline PipelineResult empirical_pipeline(const OutcomeSample& sample,
                                         const PipelineOptions& opt = {}) {
  auto w = sample.sold_competitive_bids();
  if (w.size() < opt.min_sample)
    throw data_error("pipeline: sample below the configured minimum size (" +
                     std::to_string(opt.min_sample) + ")");
  PipelineResult out;
  out.jumps = detect_jumps(w, opt.detection);
  if (out.jumps.jumps.empty())
    throw diagnostics_error("pipeline: no density discontinuities detected");

  int n_lo = opt.n_lo;
  if (n_lo == 0) {
    out.hill = hill_n_lower(sample, opt.hill);
    n_lo = out.hill->n_hat;
    if (n_lo < 2)
      throw diagnostics_error("pipeline: Hill estimate below 2; supply n_lo");
  }
  out.estimate = identify_competition(out.jumps, n_lo, opt.theta);
  if (!out.estimate.diagnostics.pass)
    throw diagnostics_error(
        "pipeline: competition diagnostics failed (inconsistent jump "
        "geometry)");

  std::sort(w.begin(), w.end());
  out.ecdf = empirical_cdf_tabulation(w, out.jumps.jumps, opt.ecdf_nodes);
  out.recovered = iterate_recovery(out.ecdf, out.estimate, opt.recovery);
  return out;
}

}  // namespace fpa
