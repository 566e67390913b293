#pragma once

// Recovery of the private-value quantile function from the winning-bid cdf
// and the competition estimate.  The top mixture component is isolated on
// the highest support segment, mapped to V there, and the identified region
// is pushed down one bid-ordering step at a time:
//
//   beta_k  = B_{nbar-1}(alpha_k)
//   G_nbar  = ((G - sum_{n<nbar} p_n G_n^n)/p_nbar)^{1/nbar}  down to beta_k
//   alpha_{k+1} = G_nbar(beta_k),  V extended via the best-response identity.
//
// The winning-bid quantile function is fitted per support segment (the cdf
// has kinks at the jump locations), so derivatives never straddle a kink.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "fpa/competition_estimate.hpp"
#include "fpa/numeric/errors.hpp"
#include "fpa/numeric/grid.hpp"

namespace fpa {

struct CdfTabulation {
  std::vector<double> b;  // strictly increasing support points
  std::vector<double> u;  // cdf values, 0..1
};

// cdf tabulation split at kink locations; both directions evaluable with
// analytic derivatives of the per-segment monotone cubic.
class SegmentedCdf {
 public:
  SegmentedCdf(const CdfTabulation& tab, const std::vector<double>& cuts) {
    if (tab.b.size() != tab.u.size() || tab.b.size() < 8)
      throw config_error("segmented cdf: need >= 8 tabulation nodes");
    std::vector<std::size_t> cut_idx;
    for (double c : cuts) {
      if (c <= tab.b.front() + 1e-12 || c >= tab.b.back() - 1e-12) continue;
      // snap to the nearest tabulation node
      auto it = std::lower_bound(tab.b.begin(), tab.b.end(), c);
      std::size_t j = std::size_t(it - tab.b.begin());
      if (j > 0 && (j == tab.b.size() ||
                    c - tab.b[j - 1] < tab.b[j] - c))
        --j;
      cut_idx.push_back(j);
    }
    std::sort(cut_idx.begin(), cut_idx.end());
    cut_idx.erase(std::unique(cut_idx.begin(), cut_idx.end()), cut_idx.end());

    std::size_t start = 0;
    auto add_segment = [&](std::size_t i0, std::size_t i1) {
      if (i1 - i0 + 1 < 4)
        throw config_error("segmented cdf: segment with < 4 nodes");
      std::vector<double> bs(tab.b.begin() + long(i0),
                             tab.b.begin() + long(i1) + 1);
      std::vector<double> us(tab.u.begin() + long(i0),
                             tab.u.begin() + long(i1) + 1);
      // strictly increasing u needed on the quantile side
      std::vector<double> bs2{bs.front()}, us2{us.front()};
      for (std::size_t i = 1; i < bs.size(); ++i)
        if (us[i] > us2.back() + 1e-15 && bs[i] > bs2.back()) {
          bs2.push_back(bs[i]);
          us2.push_back(us[i]);
        }
      if (bs2.size() < 4)
        throw config_error("segmented cdf: degenerate segment");
      Segment s;
      s.b_lo = bs2.front();
      s.b_hi = bs2.back();
      s.u_lo = us2.front();
      s.u_hi = us2.back();
      s.b2u = MonotoneCurve(bs2, us2);
      s.u2b = MonotoneCurve(us2, bs2);
      segs_.push_back(std::move(s));
    };
    for (std::size_t c : cut_idx) {
      add_segment(start, c);
      start = c;  // kink node belongs to both sides
    }
    add_segment(start, tab.b.size() - 1);
  }

  double cdf(double b) const {
    const Segment& s = seg_by_b(b);
    if (b <= s.b_lo) return s.u_lo;
    if (b >= s.b_hi) return s.u_hi;
    return s.b2u(b);
  }

  double quantile(double u) const { return seg_by_u(u).u2b(u); }

  // Derivative of the per-segment quantile fit.  The interpolant's own
  // derivative is second-order accurate in the interior but only first-order
  // at segment edges, where the top-component formulas evaluate; a one-sided
  // fourth-order stencil over the fit restores the accuracy there.
  double quantile_deriv(double u) const {
    const Segment& s = seg_by_u(u);
    const double h = s.fd_step;
    if (u - s.u_lo < 4.0 * h) {
      const double x = std::max(u, s.u_lo);
      return (-25.0 * s.u2b(x) + 48.0 * s.u2b(x + h) - 36.0 * s.u2b(x + 2 * h) +
              16.0 * s.u2b(x + 3 * h) - 3.0 * s.u2b(x + 4 * h)) /
             (12.0 * h);
    }
    if (s.u_hi - u < 4.0 * h) {
      const double x = std::min(u, s.u_hi);
      return (25.0 * s.u2b(x) - 48.0 * s.u2b(x - h) + 36.0 * s.u2b(x - 2 * h) -
              16.0 * s.u2b(x - 3 * h) + 3.0 * s.u2b(x - 4 * h)) /
             (12.0 * h);
    }
    return s.u2b.derivative(u);
  }

  double b_min() const { return segs_.front().b_lo; }
  double b_max() const { return segs_.back().b_hi; }
  double u_min() const { return segs_.front().u_lo; }

 private:
  struct Segment {
    double b_lo, b_hi, u_lo, u_hi;
    double fd_step = 1e-4;
    MonotoneCurve b2u, u2b;
  };
  std::vector<Segment> segs_;

  const Segment& seg_by_b(double b) const {
    for (std::size_t i = segs_.size(); i-- > 1;)
      if (b >= segs_[i].b_lo) return segs_[i];
    return segs_.front();
  }
  const Segment& seg_by_u(double u) const {
    // boundary levels resolve to the upper segment, whose right-side
    // derivative is the one the top-component formulas need
    for (std::size_t i = segs_.size(); i-- > 1;)
      if (u >= segs_[i].u_lo) return segs_[i];
    return segs_.front();
  }
};

struct RecoveryOptions {
  double alpha_min = 0.01;
  int max_iter = 50;
  int top_nodes = 257;
  int ext_nodes = 65;
  double clip_tol = 1e-3;  // tolerated negative excursion in the mixture residual
};

struct RecoveredValue {
  int n_lo = 2, n_hi = 2;
  std::vector<double> alphas;  // ascending, [alpha_K, 1]
  std::vector<double> V;
  std::map<int, std::vector<double>> B;  // per n on alphas
  std::vector<double> gtop_b, gtop_u;    // recovered top-component cdf
  std::vector<double> alpha_seq, beta_seq;
  int iterations = 0;          // extension rounds performed
  bool converged_early = false;
};

namespace detail {

class RecoveryEngine {
 public:
  RecoveryEngine(const SegmentedCdf& W, const CompetitionEstimate& est,
                 const RecoveryOptions& opt)
      : W_(W), est_(est), opt_(opt) {
    nbar_ = est.n_hi;
    p_top_ = est.weight(nbar_);
    if (!(p_top_ > 1e-9))
      throw diagnostics_error("recovery: top component weight is not positive");
  }

  void run() {
    step1();
    while (alpha_cur_ > opt_.alpha_min && iterations_ < opt_.max_iter) {
      if (!extend_once()) break;
    }
  }

  RecoveredValue result() const {
    RecoveredValue out;
    out.n_lo = est_.n_lo;
    out.n_hi = est_.n_hi;
    out.iterations = iterations_;
    out.converged_early = converged_early_;
    out.alpha_seq = alpha_seq_;
    out.beta_seq = beta_seq_;
    out.gtop_b = gtop_b_;
    out.gtop_u = gtop_u_;
    for (const auto& r : regions_)
      for (std::size_t i = 0; i + 1 < r.alphas.size(); ++i) {
        out.alphas.push_back(r.alphas[i]);
        out.V.push_back(r.values[i]);
      }
    for (std::size_t i = 0; i < top_alphas_.size(); ++i) {
      out.alphas.push_back(top_alphas_[i]);
      out.V.push_back(top_V_[i]);
    }
    for (int n = est_.n_lo; n <= nbar_; ++n) {
      std::vector<double> bn(out.alphas.size());
      for (std::size_t i = 0; i < out.alphas.size(); ++i)
        bn[i] = (n == nbar_) ? eval_B_top(out.alphas[i])
                             : eval_B_low(n, out.alphas[i]);
      out.B[n] = std::move(bn);
    }
    return out;
  }

  double alpha1() const {
    return alpha_seq_.empty() ? alpha_cur_ : alpha_seq_.front();
  }

 private:
  const SegmentedCdf& W_;
  const CompetitionEstimate& est_;
  RecoveryOptions opt_;
  int nbar_ = 2;
  double p_top_ = 1.0;

  // recovered top-component cdf tabulation, ascending in b
  std::vector<double> gtop_b_, gtop_u_;
  MonotoneCurve gtop_curve_;

  // V on [alpha1, 1] via the winning-bid quantile; below alpha1 in regions
  std::vector<double> top_alphas_, top_V_;
  double alpha1_ = 1.0, alpha_cur_ = 1.0;
  struct Region {
    double alpha_lo, alpha_hi;
    std::vector<double> alphas, values;
    MonotoneCurve curve;
  };
  std::vector<Region> regions_;  // most recent (deepest) first

  std::vector<double> alpha_seq_, beta_seq_;
  int iterations_ = 0;
  bool converged_early_ = false;

  double y_of(double a) const {
    return (1.0 - p_top_) + p_top_ * std::pow(a, double(nbar_));
  }

  // V on the top region from the winning-bid quantile and its derivative
  double V_top(double a) const {
    const double y = y_of(a);
    const double w = W_.quantile(y);
    const double wp = W_.quantile_deriv(y);
    return w + double(nbar_) * p_top_ / double(nbar_ - 1) *
                   std::pow(a, double(nbar_)) * wp;
  }

  double V_eval(double a) const {
    if (a >= alpha1_) return V_top(a);
    // regions_ is ordered deepest first; scan from the shallowest so the
    // first region whose lower edge is below a is the one containing it
    for (auto it = regions_.rbegin(); it != regions_.rend(); ++it)
      if (a >= it->alpha_lo - 1e-15) return it->curve(a);
    return regions_.empty() ? V_top(alpha1_)
                            : regions_.front().curve(regions_.front().alpha_lo);
  }

  // I_n(a) = int_a^1 t^{n-2} V(t) dt via per-cell Gauss panels on the node
  // set of the identified domain
  double I_n(int n, double a) const {
    using G8 = boost::math::quadrature::gauss<double, 8>;
    auto f = [&](double t) { return std::pow(t, double(n - 2)) * V_eval(t); };
    // integration breakpoints: region boundaries and top nodes above a
    double total = 0.0;
    double lo = a;
    std::vector<double> brk;  // ascending region edges above a
    for (const auto& r : regions_)  // deepest first: alpha_lo ascending
      if (r.alpha_hi > a) brk.push_back(std::max(a, r.alpha_lo));
    brk.push_back(std::max(a, alpha1_));
    for (int j = 1; j <= 8; ++j)
      brk.push_back(alpha1_ + (1.0 - alpha1_) * double(j) / 8.0);
    for (double hi : brk) {
      if (hi <= lo) continue;
      total += G8::integrate(f, lo, hi);
      lo = hi;
    }
    if (lo < 1.0) total += G8::integrate(f, lo, 1.0);
    return total;
  }

  // B_n for n < nbar via the identity B_n(a) = (n-1) a^{1-n} [b_n/(n-1) - I_n(a)]
  double eval_B_low(int n, double a) const {
    const double b_bar = est_.b_upper[std::size_t(n - est_.n_lo)];
    if (a <= 0.0) return W_.b_min();
    return double(n - 1) * std::pow(a, double(1 - n)) *
           (b_bar / double(n - 1) - I_n(n, a));
  }

  double eval_B_top(double a) const {
    if (a >= alpha1_) return W_.quantile(y_of(a));
    return gtop_curve_.inverse(a);
  }

  // G_n = B_n^{-1} by bisection over the identified domain
  double G_low(int n, double b) const {
    const double b_bar = est_.b_upper[std::size_t(n - est_.n_lo)];
    if (b >= b_bar) return 1.0;
    double lo = std::max(alpha_cur_ * 0.5, 1e-12), hi = 1.0;
    if (eval_B_low(n, lo) >= b) return lo;
    for (int it = 0; it < 100 && hi - lo > 1e-12; ++it) {
      const double mid = 0.5 * (lo + hi);
      (eval_B_low(n, mid) < b ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  // mixture residual root: G_nbar(b) on the currently identified region
  double gtop_from_mixture(double b) const {
    double acc = W_.cdf(b);
    for (int n = est_.n_lo; n < nbar_; ++n)
      acc -= est_.weight(n) * std::pow(G_low(n, b), double(n));
    double core = acc / p_top_;
    if (core < -opt_.clip_tol)
      throw diagnostics_error(
          "recovery: mixture residual negative beyond tolerance");
    core = std::clamp(core, 0.0, 1.0);
    return std::pow(core, 1.0 / double(nbar_));
  }

  // d/db of the top-component cdf, from the analytic pieces
  double gtop_deriv(double b) const {
    const double g = 1.0 / W_.quantile_deriv(W_.cdf(b));
    double acc = g;
    for (int n = est_.n_lo; n < nbar_; ++n) {
      const double a = G_low(n, b);
      if (a >= 1.0) continue;
      const double gn = a / (double(n - 1) * (V_eval(a) - b));
      acc -= est_.weight(n) * double(n) * std::pow(a, double(n - 1)) * gn;
    }
    const double gt = gtop_curve_(b);
    return acc / (p_top_ * double(nbar_) *
                  std::pow(std::max(gt, 1e-12), double(nbar_ - 1)));
  }

  void rebuild_gtop_curve() {
    auto u = pava_increasing(gtop_u_);
    gtop_u_ = std::move(u);
    gtop_curve_ = MonotoneCurve(gtop_b_, gtop_u_);
  }

  void step1() {
    const std::size_t m = est_.b_upper.size();
    const double b_hi = est_.b_upper.back();
    const double b_anchor = (m >= 2) ? est_.b_upper[m - 2] : W_.b_min();
    if (m >= 2) {
      const double core =
          (W_.cdf(b_anchor) - (1.0 - p_top_)) / p_top_;
      if (core < -opt_.clip_tol)
        throw diagnostics_error(
            "recovery: cdf below the top-component floor at the anchor");
    }
    // top-component cdf on [b_anchor, b_hi]
    const auto bs = uniform_grid(std::size_t(opt_.top_nodes), b_anchor, b_hi);
    gtop_b_.clear();
    gtop_u_.clear();
    for (double b : bs) {
      double core = (W_.cdf(b) - (1.0 - p_top_)) / p_top_;
      core = std::clamp(core, 0.0, 1.0);
      gtop_b_.push_back(b);
      gtop_u_.push_back(std::pow(core, 1.0 / double(nbar_)));
    }
    rebuild_gtop_curve();
    alpha1_ = gtop_u_.front();
    alpha_cur_ = alpha1_;
    alpha_seq_.push_back(alpha1_);

    const double lo = std::max(alpha1_, 1e-9);
    top_alphas_ = uniform_grid(std::size_t(opt_.top_nodes), lo, 1.0);
    top_V_.resize(top_alphas_.size());
    for (std::size_t i = 0; i < top_alphas_.size(); ++i)
      top_V_[i] = V_top(top_alphas_[i]);
    // the winning-bid quantile can be noisy; enforce the quantile shape
    top_V_ = pava_increasing(top_V_);
  }

  bool extend_once() {
    if (est_.n_lo == nbar_) return false;  // single component: nothing below
    const double beta = eval_B_low(nbar_ - 1, alpha_cur_);
    const double prev_lo_b = gtop_b_.front();
    if (beta >= prev_lo_b - 1e-14) {
      converged_early_ = true;
      return false;
    }
    // extend the top-component cdf down to beta
    const auto bs =
        uniform_grid(std::size_t(opt_.ext_nodes), beta, prev_lo_b);
    std::vector<double> nb, nu;
    for (std::size_t i = 0; i + 1 < bs.size(); ++i) {
      nb.push_back(bs[i]);
      nu.push_back(gtop_from_mixture(bs[i]));
    }
    const double alpha_next = nu.front();
    if (alpha_next >= alpha_cur_ - 1e-12) {
      converged_early_ = true;
      return false;
    }
    gtop_b_.insert(gtop_b_.begin(), nb.begin(), nb.end());
    gtop_u_.insert(gtop_u_.begin(), nu.begin(), nu.end());
    rebuild_gtop_curve();

    // new V region on [alpha_next, alpha_cur]
    Region reg;
    reg.alpha_lo = alpha_next;
    reg.alpha_hi = alpha_cur_;
    reg.alphas =
        uniform_grid(std::size_t(opt_.ext_nodes), alpha_next, alpha_cur_);
    reg.values.resize(reg.alphas.size());
    const double v_ceiling = V_eval(alpha_cur_);
    for (std::size_t i = 0; i < reg.alphas.size(); ++i) {
      const double a = reg.alphas[i];
      const double b = gtop_curve_.inverse(a);
      const double dg = gtop_deriv(b);
      const double bp = 1.0 / std::max(dg, 1e-12);
      double v = b + a * bp / double(nbar_ - 1);
      reg.values[i] = std::min(v, v_ceiling);
    }
    reg.values = pava_increasing(reg.values);
    reg.curve = MonotoneCurve(reg.alphas, reg.values);
    regions_.insert(regions_.begin(), std::move(reg));

    beta_seq_.push_back(beta);
    alpha_seq_.push_back(alpha_next);
    alpha_cur_ = alpha_next;
    ++iterations_;
    return true;
  }
};

}  // namespace detail

struct Step1Result {
  double alpha1 = 0.0;
  std::vector<double> gtop_b, gtop_u;
  std::vector<double> alphas, V;
  std::map<int, std::vector<double>> B;
};

inline Step1Result step1_top_component(const CdfTabulation& tab,
                                       const CompetitionEstimate& est,
                                       const RecoveryOptions& opt = {}) {
  if (!est.diagnostics.pass)
    throw diagnostics_error("recovery: competition diagnostics failed");
  std::vector<double> cuts(est.b_upper.begin(), est.b_upper.end() - 1);
  SegmentedCdf W(tab, cuts);
  RecoveryOptions only_step1 = opt;
  only_step1.max_iter = 0;
  detail::RecoveryEngine eng(W, est, only_step1);
  eng.run();
  auto full = eng.result();
  Step1Result out;
  out.alpha1 = eng.alpha1();
  out.gtop_b = std::move(full.gtop_b);
  out.gtop_u = std::move(full.gtop_u);
  out.alphas = std::move(full.alphas);
  out.V = std::move(full.V);
  out.B = std::move(full.B);
  return out;
}

inline RecoveredValue iterate_recovery(const CdfTabulation& tab,
                                       const CompetitionEstimate& est,
                                       const RecoveryOptions& opt = {}) {
  if (!est.diagnostics.pass)
    throw diagnostics_error("recovery: competition diagnostics failed");
  std::vector<double> cuts(est.b_upper.begin(), est.b_upper.end() - 1);
  SegmentedCdf W(tab, cuts);
  detail::RecoveryEngine eng(W, est, opt);
  eng.run();
  return eng.result();
}

}  // namespace fpa
