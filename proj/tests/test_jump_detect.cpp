#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fpa/jump_detect.hpp"
#include "fpa/simulate.hpp"
#include "fixtures.hpp"

using namespace fpa;

namespace {

std::vector<double> sqrt_model_sample(std::size_t L, std::uint64_t seed) {
  SimConfig c;
  c.kind = SimConfig::ModelKind::Benchmark;
  c.V = fixtures::sqrt_value();
  c.pmf = make_competition_pmf(2, {0.5, 0.5});
  c.sample_size = L;
  c.seed = seed;
  return simulate(c).sold_competitive_bids();
}

// Pilot-pinned detection settings for the 1e5 fixtures: at this sample size
// the default h0 = 0.2 leaves the difference estimate too smoothed to clear
// its critical value (the multiplier only drops below 1 above h0 ~ 0.21),
// while h0 = 0.3 detects both discontinuities with a wide margin.
DetectionConfig pilot_config() {
  DetectionConfig cfg;
  cfg.h0 = 0.3;
  return cfg;
}

}  // namespace

TEST_CASE("knn density: hand arithmetic on ten equally spaced points") {
  std::vector<double> w;
  for (int i = 0; i < 10; ++i) w.push_back(0.1 * i);
  // ell = 5, h = 0.4: k = 2, window [3, 7], 4/(10 * (W7 - W3)) = 1
  REQUIRE(knn_density(w, 5, 0.4) == Catch::Approx(1.0).margin(1e-12));
  // truncated boundary window stays finite
  REQUIRE(std::isfinite(knn_density(w, 1, 0.4)));
  REQUIRE(knn_density(w, 1, 0.4) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("knn density: near one on a large equally spaced sample") {
  std::vector<double> w;
  const int L = 2000;
  for (int i = 0; i < L; ++i) w.push_back(double(i) / L);
  for (std::size_t ell : {400u, 1000u, 1600u})
    REQUIRE(knn_density(w, ell, 0.2) == Catch::Approx(1.0).margin(0.01));
}

TEST_CASE("knn density: degenerate window of ties raises") {
  std::vector<double> w(50, 1.0);
  REQUIRE_THROWS_AS(knn_density(w, 25, 0.2), numeric_error);
}

TEST_CASE("tentative jump fluctuates around zero on uniform draws") {
  SimConfig c;
  c.kind = SimConfig::ModelKind::Benchmark;
  c.V = fixtures::uniform_value();
  c.pmf = make_competition_pmf(2, {1.0});
  c.sample_size = 50000;
  c.seed = 13;
  // winning bid of the single-component uniform model: cdf (2b)^2 on [0,1/2]
  auto w = simulate(c).sold_competitive_bids();
  std::sort(w.begin(), w.end());
  // interior indices away from the support ends
  for (std::size_t ell = 10000; ell <= 40000; ell += 10000) {
    const double d = tentative_jump(w, ell, 0.1);
    REQUIRE(std::abs(d) < 0.6);  // density scale here is ~2.4
  }
}

TEST_CASE("tentative jump at the order statistic nearest a true jump") {
  auto w = sqrt_model_sample(100000, 4101);
  std::sort(w.begin(), w.end());
  // order statistic nearest 2/3
  const auto it = std::lower_bound(w.begin(), w.end(), 2.0 / 3.0);
  const std::size_t ell = std::size_t(it - w.begin());
  // small window: nearly unbiased difference, value close to the size 3
  const double d = tentative_jump(w, ell, 0.02);
  REQUIRE(d == Catch::Approx(3.0).margin(0.35));
}

TEST_CASE("tentative jump at the top of a step density") {
  // density 2 on [0, 1/2]: the sample maximum sees only the left estimator
  SimConfig c;
  c.kind = SimConfig::ModelKind::Benchmark;
  c.V = fixtures::uniform_value();
  c.pmf = make_competition_pmf(2, {1.0});
  c.sample_size = 100000;
  c.seed = 77;
  auto w = simulate(c).sold_competitive_bids();
  for (double& x : w) x = 2.0 * x * x;  // (2W)^2/2 is uniform on [0, 1/2]
  std::sort(w.begin(), w.end());
  const double d = tentative_jump(w, w.size(), 0.05);
  REQUIRE(d == Catch::Approx(2.0).margin(0.15));
}

TEST_CASE("critical multiplier closed form at the defaults") {
  // sqrt(ln 5) + (ln ln 5 - ln pi + 0.02) / (2 sqrt(ln 5))
  REQUIRE(critical_multiplier(0.2, 0.01) ==
          Catch::Approx(1.01291).margin(1e-4));
  // independent arithmetic
  const double r = std::sqrt(std::log(5.0));
  const double want =
      r + (std::log(std::log(5.0)) - std::log(3.14159265358979323846) + 0.02) /
              (2.0 * r);
  REQUIRE(critical_multiplier(0.2, 0.01) == Catch::Approx(want).margin(1e-12));
}

TEST_CASE("critical value is proportional to the density estimate") {
  REQUIRE(critical_value(0.0, 0.2, 0.01) == 0.0);
  const double c1 = critical_value(1.3, 0.2, 0.01);
  REQUIRE(critical_value(2.6, 0.2, 0.01) == Catch::Approx(2.0 * c1));
}

TEST_CASE("h0 at or above 1/e is rejected") {
  REQUIRE_THROWS_AS(critical_multiplier(0.4, 0.01), config_error);
  DetectionConfig cfg;
  cfg.h0 = 0.37;
  REQUIRE_THROWS_AS(cfg.validate(), config_error);
}

TEST_CASE("two jumps of the sqrt model are found with the right sizes") {
  auto w = sqrt_model_sample(100000, 4101);
  auto js = detect_jumps(w, pilot_config());
  REQUIRE(js.jumps.size() == 2);
  REQUIRE(js.jumps[0].location == Catch::Approx(2.0 / 3.0).margin(0.02));
  REQUIRE(js.jumps[1].location == Catch::Approx(4.0 / 5.0).margin(0.02));
  REQUIRE(js.jumps[0].size == Catch::Approx(3.0).epsilon(0.15));
  REQUIRE(js.jumps[1].size == Catch::Approx(3.75).epsilon(0.15));
  REQUIRE_FALSE(js.jumps[0].at_upper_edge);
  REQUIRE(js.jumps[1].at_upper_edge);
}

TEST_CASE("uniform draws produce no interior jumps") {
  SimConfig c;
  c.kind = SimConfig::ModelKind::Benchmark;
  c.V = fixtures::uniform_value();
  c.pmf = make_competition_pmf(2, {1.0});
  c.sample_size = 100000;
  c.seed = 19;
  auto w = simulate(c).sold_competitive_bids();
  for (double& x : w) x = 2.0 * x * x;  // uniform on [0, 1/2]
  auto js = detect_jumps(w, pilot_config());
  int interior = 0;
  for (const auto& j : js.jumps)
    if (!j.at_upper_edge) ++interior;
  REQUIRE(interior == 0);
}

TEST_CASE("single-component model yields exactly one jump at its upper bound") {
  SimConfig c;
  c.kind = SimConfig::ModelKind::Benchmark;
  c.V = fixtures::uniform_value();
  c.pmf = make_competition_pmf(2, {1.0});
  c.sample_size = 100000;
  c.seed = 23;
  auto w = simulate(c).sold_competitive_bids();
  auto js = detect_jumps(w, pilot_config());
  REQUIRE(js.jumps.size() == 1);
  REQUIRE(js.jumps[0].location == Catch::Approx(0.5).margin(0.01));
  REQUIRE(js.jumps[0].at_upper_edge);
}

TEST_CASE("reported jumps are separated by the exclusion window") {
  auto w = sqrt_model_sample(100000, 4101);
  auto js = detect_jumps(w, pilot_config());
  const std::size_t k = std::size_t(std::llround(0.3 * 1e5 / 2.0));
  for (std::size_t i = 1; i < js.jumps.size(); ++i) {
    const auto a = js.jumps[i - 1].index, b = js.jumps[i].index;
    REQUIRE((b > a ? b - a : a - b) > k);
  }
}

TEST_CASE("raising epsilon never increases the number of jumps") {
  auto w = sqrt_model_sample(50000, 555);
  int prev = 1000;
  for (double eps : {0.01, 0.5, 2.0, 8.0}) {
    auto cfg = pilot_config();
    cfg.epsilon = eps;
    const int got = int(detect_jumps(w, cfg).jumps.size());
    REQUIRE(got <= prev);
    prev = got;
  }
}

TEST_CASE("discontinuous density estimate integrates to about one") {
  auto w = sqrt_model_sample(100000, 4101);
  auto js = detect_jumps(w, pilot_config());
  // piecewise trapezoid over segments
  double mass = 0.0;
  for (std::size_t i = 1; i < js.density_x.size(); ++i) {
    if (js.density_segment[i] != js.density_segment[i - 1]) continue;
    mass += 0.5 * (js.density_y[i] + js.density_y[i - 1]) *
            (js.density_x[i] - js.density_x[i - 1]);
  }
  REQUIRE(mass == Catch::Approx(1.0).epsilon(0.05));
}

TEST_CASE("scale equivariance of locations, sizes and indices") {
  auto w = sqrt_model_sample(20000, 321);
  auto base = detect_jumps(w, pilot_config());
  const double lambda = 37.5;
  auto scaled_sample = w;
  for (double& x : scaled_sample) x *= lambda;
  auto scaled = detect_jumps(scaled_sample, pilot_config());
  REQUIRE(scaled.jumps.size() == base.jumps.size());
  for (std::size_t i = 0; i < base.jumps.size(); ++i) {
    REQUIRE(scaled.jumps[i].index == base.jumps[i].index);
    REQUIRE(scaled.jumps[i].location ==
            Catch::Approx(lambda * base.jumps[i].location).epsilon(1e-12));
    REQUIRE(scaled.jumps[i].size ==
            Catch::Approx(base.jumps[i].size / lambda).epsilon(1e-12));
  }
}

TEST_CASE("tiny samples are rejected") {
  std::vector<double> w = {1.0, 2.0, 3.0};
  REQUIRE_THROWS_AS(detect_jumps(w, pilot_config()), data_error);
}
