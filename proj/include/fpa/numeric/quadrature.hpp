#pragma once

// Composite Gauss-Legendre quadrature.  All equilibrium-mapping integrals in
// this library are smooth after the substitutions applied by the callers, so
// fixed-order panels are enough; adaptivity is never required.

#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "fpa/numeric/errors.hpp"

namespace fpa {

template <class F>
double gauss_legendre(const F& f, double a, double b) {
  return boost::math::quadrature::gauss<double, 64>::integrate(f, a, b);
}

template <class F>
double composite_gl(const F& f, const std::vector<double>& breaks) {
  if (breaks.size() < 2) throw numeric_error("composite_gl: need >= 2 breaks");
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    s += boost::math::quadrature::gauss<double, 32>::integrate(f, breaks[i],
                                                               breaks[i + 1]);
  if (!std::isfinite(s)) throw numeric_error("composite_gl: non-finite result");
  return s;
}

// Panel breakpoints on [a,b] clustered quadratically toward a.
inline std::vector<double> graded_breaks(int cells, double a, double b) {
  std::vector<double> br(std::size_t(cells) + 1);
  for (int i = 0; i <= cells; ++i) {
    double t = double(i) / double(cells);
    br[std::size_t(i)] = a + (b - a) * t * t;
  }
  br.back() = b;
  return br;
}

inline std::vector<double> uniform_breaks(int cells, double a, double b) {
  std::vector<double> br(std::size_t(cells) + 1);
  for (int i = 0; i <= cells; ++i)
    br[std::size_t(i)] = a + (b - a) * double(i) / double(cells);
  br.back() = b;
  return br;
}

}  // namespace fpa
