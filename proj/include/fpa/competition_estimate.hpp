#pragma once

// From detected density discontinuities to the competition distribution:
// the value upper bound and the mixture weights are exact functions of the
// jump locations and sizes, with inequality diagnostics that flag data no
// equilibrium mixture can rationalize.  Includes the CRRA lower-bound solve.

#include <cmath>
#include <string>
#include <vector>

#include "fpa/jump_detect.hpp"
#include "fpa/numeric/errors.hpp"

namespace fpa {

struct CompetitionDiagnostics {
  bool all_sizes_positive = true;
  bool v_hi_above_support = true;   // v_hat > largest jump location
  bool upper_bound_inequality = true;   // sum w_k (b_top - b_k) <= 1
  double upper_bound_lhs = 0.0;
  bool weight_inequalities = true;      // p_n <= 1 family
  std::vector<double> weight_slack;     // rhs - lhs per component
  bool pass = false;
};

struct CompetitionEstimate {
  int n_lo = 2;
  int n_hi = 2;
  double theta = 1.0;
  std::vector<double> weights;    // p_n(theta), n = n_lo..n_hi
  std::vector<double> b_upper;    // jump locations = conditional upper bounds
  std::vector<double> jump_sizes;
  double v_hi_hat = 0.0;
  CompetitionDiagnostics diagnostics;

  double weight(int n) const {
    if (n < n_lo || n > n_hi) return 0.0;
    return weights[std::size_t(n - n_lo)];
  }
};

// v_hat(theta) = (theta + sum w_k b_k) / (sum w_k),
// p_n(theta)   = w_n / S + (1/theta) w_n (T/S - b_n),
// with w_n = ((n-1)/n) Delta_n, S = sum w_k, T = sum w_k b_k.
inline CompetitionEstimate identify_competition(const std::vector<Jump>& jumps,
                                                int n_lo, double theta = 1.0) {
  if (jumps.empty()) throw config_error("identify_competition: no jumps");
  if (n_lo < 2) throw config_error("identify_competition: n_lo must be >= 2");
  if (!(theta > 0.0 && theta <= 1.0))
    throw config_error("identify_competition: theta must be in (0,1]");
  for (std::size_t i = 1; i < jumps.size(); ++i)
    if (!(jumps[i].location > jumps[i - 1].location))
      throw config_error("identify_competition: jumps must be ordered");

  CompetitionEstimate est;
  est.n_lo = n_lo;
  est.n_hi = n_lo + int(jumps.size()) - 1;
  est.theta = theta;

  const std::size_t m = jumps.size();
  std::vector<double> w(m);
  double S = 0.0, T = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const int n = n_lo + int(i);
    est.b_upper.push_back(jumps[i].location);
    est.jump_sizes.push_back(jumps[i].size);
    est.diagnostics.all_sizes_positive =
        est.diagnostics.all_sizes_positive && jumps[i].size > 0.0;
    w[i] = double(n - 1) / double(n) * jumps[i].size;
    S += w[i];
    T += w[i] * jumps[i].location;
  }
  if (!(S > 0.0))
    throw numeric_error("identify_competition: nonpositive size total");

  est.v_hi_hat = (theta + T) / S;
  est.weights.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    est.weights[i] = w[i] / S + (1.0 / theta) * w[i] * (T / S - est.b_upper[i]);

  auto& d = est.diagnostics;
  const double b_top = est.b_upper.back();
  d.v_hi_above_support = est.v_hi_hat > b_top;
  d.upper_bound_lhs = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    d.upper_bound_lhs += w[i] * (b_top - est.b_upper[i]);
  d.upper_bound_inequality = d.upper_bound_lhs <= 1.0;
  d.weight_slack.resize(m);
  for (std::size_t n = 0; n < m; ++n) {
    double lhs = 1.0;
    for (std::size_t k = 0; k < m; ++k)
      lhs += w[k] * (est.b_upper[k] - est.b_upper[n]);
    const double rhs = S / w[n];
    d.weight_slack[n] = rhs - lhs;
    if (lhs > rhs) d.weight_inequalities = false;
  }
  bool weights_in_range = true;
  for (double p : est.weights)
    if (p < -1e-12 || p > 1.0 + 1e-12) weights_in_range = false;
  d.pass = d.all_sizes_positive && d.v_hi_above_support &&
           d.upper_bound_inequality && d.weight_inequalities &&
           weights_in_range;
  return est;
}

inline CompetitionEstimate identify_competition(const JumpSet& jumps, int n_lo,
                                                double theta = 1.0) {
  return identify_competition(jumps.jumps, n_lo, theta);
}

// Lower bound for the CRRA exponent from the constraint families
// p_n(theta) in [0,1] and v_hat(theta) > b_top.  Every p_n(theta) is affine
// in 1/theta, so each constraint solves in closed form.
struct ThetaBoundReport {
  bool informative = false;
  double lower = 0.0;
  std::string binding_constraint;
  struct Item {
    std::string constraint;
    double bound;  // implied lower bound for theta (0 if none)
  };
  std::vector<Item> items;
};

inline ThetaBoundReport crra_lower_bound(const std::vector<Jump>& jumps,
                                         int n_lo) {
  if (jumps.empty()) throw config_error("crra bound: no jumps");
  const std::size_t m = jumps.size();
  std::vector<double> w(m), b(m);
  double S = 0.0, T = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const int n = n_lo + int(i);
    w[i] = double(n - 1) / double(n) * jumps[i].size;
    b[i] = jumps[i].location;
    S += w[i];
    T += w[i] * b[i];
  }
  ThetaBoundReport rep;
  auto consider = [&](const std::string& name, double bound) {
    rep.items.push_back({name, bound});
    if (bound > 0.0 && (!rep.informative || bound > rep.lower)) {
      rep.informative = true;
      rep.lower = bound;
      rep.binding_constraint = name;
    }
  };
  // v_hat(theta) > b_top  <=>  theta > S b_top - T
  consider("v_hat > b_top", S * b.back() - T);
  for (std::size_t i = 0; i < m; ++i) {
    const int n = n_lo + int(i);
    const double A = w[i] / S;           // p_n as A + C/theta
    const double C = w[i] * (T / S - b[i]);
    const std::string tag = "p_" + std::to_string(n);
    if (C > 0.0 && A < 1.0) consider(tag + " <= 1", C / (1.0 - A));
    else consider(tag + " <= 1", 0.0);
    if (C < 0.0) consider(tag + " >= 0", -C / A);
    else consider(tag + " >= 0", 0.0);
  }
  return rep;
}

inline ThetaBoundReport crra_lower_bound(const JumpSet& jumps, int n_lo) {
  return crra_lower_bound(jumps.jumps, n_lo);
}

}  // namespace fpa
