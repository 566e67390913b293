#pragma once

// Distribution of the number of active buyers N on {n_lo, ..., n_hi}.

#include <cmath>
#include <numeric>
#include <vector>

#include "fpa/numeric/errors.hpp"

namespace fpa {

struct CompetitionPMF {
  int n_lo = 2;
  int n_hi = 2;
  std::vector<double> weights;  // p_n for n = n_lo..n_hi, all > 0

  double weight(int n) const {
    if (n < n_lo || n > n_hi) return 0.0;
    return weights[std::size_t(n - n_lo)];
  }
};

inline CompetitionPMF make_competition_pmf(int n_lo,
                                           std::vector<double> weights) {
  if (n_lo < 2) throw config_error("competition pmf: n_lo must be >= 2");
  if (weights.empty()) throw config_error("competition pmf: empty weights");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0))
      throw config_error("competition pmf: weights must be strictly positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw config_error("competition pmf: weights must sum to 1");
  CompetitionPMF p;
  p.n_lo = n_lo;
  p.n_hi = n_lo + int(weights.size()) - 1;
  p.weights = std::move(weights);
  return p;
}

// Binomial(nbar, 1-q) conditioned on at least two successes; the mixture
// weights of participation models with screening level q.
inline CompetitionPMF binomial_conditional_pmf(int nbar, double q) {
  if (nbar < 2) throw config_error("binomial pmf: nbar must be >= 2");
  if (!(q > 0.0 && q < 1.0)) throw config_error("binomial pmf: q in (0,1)");
  std::vector<double> w;
  double norm = 0.0;
  for (int n = 2; n <= nbar; ++n) {
    double c = 1.0;
    for (int i = 0; i < n; ++i)
      c = c * double(nbar - i) / double(i + 1);
    const double pn = c * std::pow(1.0 - q, n) * std::pow(q, nbar - n);
    w.push_back(pn);
    norm += pn;
  }
  for (double& x : w) x /= norm;
  CompetitionPMF p;
  p.n_lo = 2;
  p.n_hi = nbar;
  p.weights = std::move(w);
  return p;
}

}  // namespace fpa
