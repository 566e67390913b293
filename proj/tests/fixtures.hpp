#pragma once

// Shared test fixtures and independent oracles.  Everything here is kept
// deliberately separate from the library's computation paths: closed forms,
// tanh-sinh quadrature and finite differences only.

#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fpa/value_quantile.hpp"

namespace fixtures {

// V(alpha) = sqrt(alpha): the working model with closed-form equilibrium
// B_n(alpha) = (n-1)/(n-1/2) sqrt(alpha).
inline fpa::ValueQuantile sqrt_value() {
  return fpa::make_value_quantile(
      [](double a) { return std::sqrt(a); },
      [](double a) { return 0.5 / std::sqrt(a); });
}

// V(alpha) = alpha: uniform private values, B_n(alpha) = ((n-1)/n) alpha.
inline fpa::ValueQuantile uniform_value() {
  return fpa::make_value_quantile([](double a) { return a; },
                                  [](double) { return 1.0; });
}

// High-precision oracle for the bid quantile integral
// B_n(alpha) = c alpha^{-c} int_0^alpha t^{c-1} V(t) dt, c = (n-1)/theta,
// evaluated with tanh-sinh quadrature (handles the t^{c-1} endpoint).
inline double bid_quantile_oracle(const std::function<double(double)>& V,
                                  int n, double theta, double alpha) {
  const double c = double(n - 1) / theta;
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto f = [&](double t) { return std::pow(t, c - 1.0) * V(t); };
  const double integral = integrator.integrate(f, 0.0, alpha);
  return c * std::pow(alpha, -c) * integral;
}

// Finite-difference oracle for the inverse mapping
// V(alpha) = B(alpha) + theta alpha B'(alpha)/(n-1), step 1e-6.
inline double value_from_bid_oracle(const std::function<double(double)>& B,
                                    int n, double theta, double alpha) {
  const double h = 1e-6;
  const double lo = std::max(0.0, alpha - h);
  const double hi = std::min(1.0, alpha + h);
  const double d = (B(hi) - B(lo)) / (hi - lo);
  return B(alpha) + theta * alpha * d / double(n - 1);
}

// Closed-form winning-bid cdf of the sqrt-value model with p2 = p3 = 1/2:
// G(b) = 1/2 (3b/2)^4 + 1/2 (5b/4)^6 on [0, 4/5].
inline double sqrt_model_cdf(double b) {
  auto clip01 = [](double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); };
  const double g2 = clip01(1.5 * b * 1.5 * b);
  const double g3 = clip01(1.25 * b * 1.25 * b);
  return 0.5 * g2 * g2 + 0.5 * g3 * g3 * g3;
}

inline double sqrt_model_pdf(double b) {
  double s = 0.0;
  if (b >= 0.0 && b <= 2.0 / 3.0) s += 0.5 * 4.0 * std::pow(1.5, 4) * b * b * b;
  if (b >= 0.0 && b <= 4.0 / 5.0)
    s += 0.5 * 6.0 * std::pow(1.25, 6) * std::pow(b, 5);
  return s;
}

}  // namespace fixtures
