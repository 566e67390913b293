#pragma once

// Density discontinuity detection on a raw sample: left/right k-NN density
// estimates at every order statistic, greedy extraction of the largest
// differences against a critical value proportional to the local density,
// and a discontinuous density estimate over the resulting segments.
//
// Index windows are h*L/2 order statistics wide, truncated at the sample
// ends in both the numerator and the denominator.  The first and last
// window-lengths of indices stay eligible: the top component's jump sits at
// the sample maximum, where only the left estimator carries information.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "fpa/numeric/errors.hpp"

namespace fpa {

struct DetectionConfig {
  double h0 = 0.2;      // window fraction for detection
  double h1 = 0.5;      // window fraction for the density estimate
  double epsilon = 0.01;
  int max_jumps = 10;
  // The jump size is re-estimated at the detected index with a window of
  // h0 * size_refine, trading variance for much less smoothing bias.
  double size_refine = 0.25;

  void validate() const {
    if (!(h0 > 0.0 && h1 > h0 && h1 < 1.0))
      throw config_error("detection: need 0 < h0 < h1 < 1");
    if (!(epsilon > 0.0)) throw config_error("detection: epsilon must be > 0");
    if (h0 >= std::exp(-1.0))
      throw config_error(
          "detection: h0 must be below 1/e, the critical value is undefined "
          "otherwise");
    if (max_jumps < 1) throw config_error("detection: max_jumps must be >= 1");
    if (!(size_refine > 0.0 && size_refine <= 1.0))
      throw config_error("detection: size_refine must be in (0,1]");
  }
};

struct Jump {
  double location = 0.0;
  double size = 0.0;
  std::size_t index = 0;  // 1-based order-statistic index
  bool at_upper_edge = false;
};

struct JumpSet {
  std::vector<Jump> jumps;  // ordered by location
  std::vector<double> density_x;
  std::vector<double> density_y;
  std::vector<int> density_segment;
  std::size_t sample_size = 0;
  int degenerate_warnings = 0;
};

namespace detail {
inline std::size_t window_k(double h, std::size_t L) {
  const double k = h * double(L) / 2.0;
  return std::max<std::size_t>(1, std::size_t(std::llround(k)));
}
}  // namespace detail

// k-NN density estimate at the (1-based) order statistic ell.
inline double knn_density(const std::vector<double>& sorted, std::size_t ell,
                          double h) {
  const std::size_t L = sorted.size();
  if (L < 4) throw config_error("knn density: need at least 4 points");
  if (ell < 1 || ell > L) throw config_error("knn density: index out of range");
  const std::size_t k = detail::window_k(h, L);
  const std::size_t lo = ell > k ? ell - k : 1;
  const std::size_t hi = std::min(ell + k, L);
  const double span = sorted[hi - 1] - sorted[lo - 1];
  if (!(span > 0.0))
    throw numeric_error("knn density: degenerate window (tied values)");
  return double(hi - lo) / (double(L) * span);
}

// Left minus right k-NN estimate at the order statistic ell; positive values
// indicate a downward density jump.  Empty one-sided windows (at the sample
// ends) contribute zero.
inline double tentative_jump(const std::vector<double>& sorted,
                             std::size_t ell, double h) {
  const std::size_t L = sorted.size();
  if (L < 4) throw config_error("tentative jump: need at least 4 points");
  if (ell < 1 || ell > L)
    throw config_error("tentative jump: index out of range");
  const std::size_t k = detail::window_k(h, L);
  const std::size_t lo = ell > k ? ell - k : 1;
  const std::size_t hi = std::min(ell + k, L);
  double left = 0.0, right = 0.0;
  if (ell > lo) {
    const double span = sorted[ell - 1] - sorted[lo - 1];
    if (!(span > 0.0))
      throw numeric_error("tentative jump: degenerate left window");
    left = double(ell - lo) / (double(L) * span);
  }
  if (hi > ell) {
    const double span = sorted[hi - 1] - sorted[ell - 1];
    if (!(span > 0.0))
      throw numeric_error("tentative jump: degenerate right window");
    right = double(hi - ell) / (double(L) * span);
  }
  return left - right;
}

// c(eps; h0) = sqrt(ln(1/h0)) + (ln ln(1/h0) - ln pi + 2 eps)/(2 sqrt(ln(1/h0)))
inline double critical_multiplier(double h0, double epsilon) {
  if (h0 >= std::exp(-1.0))
    throw config_error("critical value: h0 must be below 1/e");
  if (!(epsilon > 0.0)) throw config_error("critical value: epsilon > 0");
  const double l = std::log(1.0 / h0);
  const double r = std::sqrt(l);
  const double pi = 3.14159265358979323846;
  return r + (std::log(l) - std::log(pi) + 2.0 * epsilon) / (2.0 * r);
}

inline double critical_value(double density_estimate, double h0,
                             double epsilon) {
  return density_estimate * critical_multiplier(h0, epsilon);
}

inline JumpSet detect_jumps(std::vector<double> sample,
                            const DetectionConfig& cfg = {}) {
  cfg.validate();
  const std::size_t L = sample.size();
  if (L < 20) throw data_error("detect_jumps: need at least 20 observations");
  std::stable_sort(sample.begin(), sample.end());

  JumpSet out;
  out.sample_size = L;
  const std::size_t k = detail::window_k(cfg.h0, L);
  const double cmul = critical_multiplier(cfg.h0, cfg.epsilon);

  // tentative jumps and local densities at every order statistic
  std::vector<double> delta(L), ghat(L);
  constexpr double kSkipped = -std::numeric_limits<double>::infinity();
  for (std::size_t ell = 1; ell <= L; ++ell) {
    try {
      delta[ell - 1] = tentative_jump(sample, ell, cfg.h0);
      ghat[ell - 1] = knn_density(sample, ell, cfg.h0);
    } catch (const numeric_error&) {
      delta[ell - 1] = kSkipped;
      ghat[ell - 1] = 0.0;
      ++out.degenerate_warnings;
    }
  }

  // greedy extraction with exclusion windows
  std::vector<char> excluded(L, 0);
  for (int round = 0; round < cfg.max_jumps; ++round) {
    std::size_t best = 0;
    double best_delta = kSkipped;
    for (std::size_t ell = 1; ell <= L; ++ell) {
      if (excluded[ell - 1]) continue;
      if (delta[ell - 1] > best_delta) {
        best_delta = delta[ell - 1];
        best = ell;
      }
    }
    if (best == 0 || best_delta == kSkipped) break;
    if (best_delta < cmul * ghat[best - 1]) break;  // below the critical value

    Jump j;
    j.index = best;
    j.location = sample[best - 1];
    j.at_upper_edge = (best == L);
    // refinement pass for the size: same estimator, tighter window
    try {
      j.size = tentative_jump(sample, best, cfg.h0 * cfg.size_refine);
    } catch (const numeric_error&) {
      j.size = best_delta;
      ++out.degenerate_warnings;
    }
    out.jumps.push_back(j);

    const std::size_t lo = best > k ? best - k : 1;
    const std::size_t hi = std::min(best + k, L);
    for (std::size_t ell = lo; ell <= hi; ++ell) excluded[ell - 1] = 1;
  }
  std::sort(out.jumps.begin(), out.jumps.end(),
            [](const Jump& a, const Jump& b) { return a.location < b.location; });

  // discontinuous density estimate: h1 windows clipped at segment boundaries
  std::vector<std::size_t> cuts;  // segment-closing indices, ascending
  for (const auto& j : out.jumps) cuts.push_back(j.index);
  if (cuts.empty() || cuts.back() != L) cuts.push_back(L);
  const std::size_t k1 = detail::window_k(cfg.h1, L);
  std::size_t seg_start = 1;  // segment is (seg_start, seg_end]
  for (std::size_t s = 0; s < cuts.size(); ++s) {
    const std::size_t seg_end = cuts[s];
    for (std::size_t ell = seg_start + 1; ell <= seg_end; ++ell) {
      const std::size_t lo = std::max(ell > k1 ? ell - k1 : 1, seg_start + 1);
      const std::size_t hi = std::min(ell + k1, seg_end);
      const double span = sample[hi - 1] - sample[lo - 1];
      out.density_x.push_back(sample[ell - 1]);
      out.density_segment.push_back(int(s));
      if (span > 0.0 && hi > lo)
        out.density_y.push_back(double(hi - lo) / (double(L) * span));
      else {
        out.density_y.push_back(0.0);
        ++out.degenerate_warnings;
      }
    }
    seg_start = seg_end;
  }
  return out;
}

}  // namespace fpa
