#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "dcc/baselines.hpp"
#include "dcc/errors.hpp"
#include "dcc/rng.hpp"
#include "dcc/special.hpp"

using namespace dcc;

TEST_CASE("ks statistic on constructed samples") {
  // Equioscillating sample: F_n and Phi differ by exactly 0.5/n everywhere.
  const int n = 40;
  std::vector<double> sample(n);
  for (int i = 0; i < n; ++i)
    sample[i] = std_normal_quantile((i + 0.5) / n);
  CHECK(ks_fixed_statistic(sample) == doctest::Approx(0.5 / n).epsilon(1e-6));

  // Point mass far in the tail.
  CHECK(ks_fixed_statistic(std::vector<double>(20, 10.0)) > 0.99);
}

TEST_CASE("location-scale invariance of lilliefors and anderson-darling") {
  Rng rng = RngKey::root(1).engine();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> y(60), y2(60);
  for (size_t i = 0; i < y.size(); ++i) {
    y[i] = normal(rng);
    y2[i] = 3.0 * y[i] + 11.0;
  }
  CHECK(std::abs(lilliefors_statistic(y) - lilliefors_statistic(y2)) < 1e-12);
  CHECK(std::abs(anderson_darling_statistic(y) -
                 anderson_darling_statistic(y2)) < 1e-12);
  CHECK(std::abs(jarque_bera_statistic(y) - jarque_bera_statistic(y2)) < 1e-9);
}

TEST_CASE("jarque-bera vanishes for a symmetric mesokurtic sample") {
  // Four +-1 pairs and one +-c pair with c chosen so the sample kurtosis is
  // exactly 3; symmetry kills the skewness term.
  const double c2 = (24.0 + std::sqrt(800.0)) / 4.0;
  const double c = std::sqrt(c2);
  std::vector<double> y;
  for (int i = 0; i < 4; ++i) {
    y.push_back(1.0);
    y.push_back(-1.0);
  }
  y.push_back(c);
  y.push_back(-c);
  CHECK(jarque_bera_statistic(y) == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
}

TEST_CASE("statistics are permutation invariant except ljung-box") {
  Rng rng = RngKey::root(2).engine();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> y(50);
  for (auto& v : y) v = normal(rng);
  std::vector<double> shuffled = y;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);

  CHECK(ks_fixed_statistic(y) == doctest::Approx(ks_fixed_statistic(shuffled)));
  CHECK(lilliefors_statistic(y) ==
        doctest::Approx(lilliefors_statistic(shuffled)));
  CHECK(anderson_darling_statistic(y) ==
        doctest::Approx(anderson_darling_statistic(shuffled)));
  CHECK(jarque_bera_statistic(y) ==
        doctest::Approx(jarque_bera_statistic(shuffled)));

  // Ljung-Box depends on order: an AR-like reordering changes it. Sorting
  // maximizes neighbor correlation and must move the statistic.
  std::vector<double> sorted = y;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::abs(ljung_box_statistic(y, 4) - ljung_box_statistic(sorted, 4)) >
        1e-6);
}

TEST_CASE("ljung-box statistic matches direct summation") {
  Rng rng = RngKey::root(3).engine();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> e(20);
  for (auto& v : e) v = normal(rng);
  const int n = 20, h = 3;

  double mean = 0.0;
  for (double v : e) mean += v / n;
  double denom = 0.0;
  for (double v : e) denom += (v - mean) * (v - mean);
  double q = 0.0;
  for (int k = 1; k <= h; ++k) {
    double rk = 0.0;
    for (int i = 0; i + k < n; ++i) rk += (e[i] - mean) * (e[i + k] - mean);
    rk /= denom;
    q += rk * rk / (n - k);
  }
  q *= n * (n + 2.0);
  CHECK(ljung_box_statistic(e, h) == doctest::Approx(q).epsilon(1e-10));
}

TEST_CASE("ljung-box zero-autocorrelation residuals give q=0, p=1") {
  // Nonzero entries three apart: every lag-1 and lag-2 product vanishes and
  // the sample mean is zero.
  std::vector<double> e = {1, 0, 0, -1, 0, 0, 1, 0, 0, -1, 0, 0};
  TestReport r = ljung_box(e, 2, 1, 0.05);
  CHECK(r.statistic == doctest::Approx(0.0));
  CHECK(r.p_value == doctest::Approx(1.0));
  CHECK_FALSE(r.reject);
}

TEST_CASE("ljung-box surfaces nonpositive degrees of freedom") {
  std::vector<double> e(10, 0.0);
  Rng rng = RngKey::root(4).engine();
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& v : e) v = normal(rng);
  CHECK(ljung_box_default_lags(10) == 2);
  CHECK_THROWS_AS(ljung_box(e, 2, 2, 0.05), Error);
  // d_param = 1 leaves one degree of freedom.
  TestReport r = ljung_box(e, 2, 1, 0.05);
  CHECK(r.p_value > 0.0);
  CHECK(r.p_value <= 1.0);
}

TEST_CASE("ljung-box default lag count is round(ln n)") {
  CHECK(ljung_box_default_lags(100) == 5);    // ln 100 = 4.605
  CHECK(ljung_box_default_lags(1000) == 7);   // ln 1000 = 6.908
}

TEST_CASE("calibrated levels are accurate under the null") {
  CalibrationCache cache;
  BaselineSettings settings;
  settings.level = 0.10;
  settings.calibration_reps = 20000;

  const int sims = 1000, n = 100;
  RngKey root = RngKey::root(5);
  int rej_ks = 0, rej_lil = 0, rej_ad = 0, rej_jb = 0;
  for (int s = 0; s < sims; ++s) {
    Rng rng = root.child(s).engine();
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> y(n);
    for (auto& v : y) v = normal(rng);
    Dataset data = Dataset::from_scalars(y);
    rej_ks += ks_fixed(data, settings, cache).reject;
    rej_lil += lilliefors(data, settings, cache).reject;
    rej_ad += anderson_darling(data, settings, cache).reject;
    rej_jb += jarque_bera(data, settings, cache).reject;
  }
  for (int r : {rej_ks, rej_lil, rej_ad, rej_jb})
    CHECK(std::abs(r / static_cast<double>(sims) - 0.10) < 0.03);
}

TEST_CASE("calibration cache round-trips through its csv file") {
  std::string path = "calib_cache_test.csv";
  std::remove(path.c_str());
  double first;
  {
    CalibrationCache cache(path);
    first = cache.threshold("jb", 50, 0.10, 5000, 123);
  }
  {
    CalibrationCache cache(path);
    CHECK(cache.threshold("jb", 50, 0.10, 5000, 123) == first);
  }
  std::remove(path.c_str());
}

TEST_CASE("test reports carry consistent reject flags") {
  Rng rng = RngKey::root(6).engine();
  CalibrationCache cache;
  BaselineSettings settings;
  settings.level = 0.10;
  settings.calibration_reps = 20000;
  // Uniform data: strongly non-normal, all tests should reject.
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> y(200);
  for (auto& v : y) v = unif(rng);
  Dataset data = Dataset::from_scalars(y);
  for (auto* fn : {&anderson_darling, &lilliefors}) {
    TestReport r = (*fn)(data, settings, cache);
    CHECK(r.reject);
    CHECK(r.statistic > r.threshold);
    CHECK(r.calibration.find("simulated") != std::string::npos);
  }
}
