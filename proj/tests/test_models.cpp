#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "dcc/distributions.hpp"
#include "dcc/errors.hpp"
#include "dcc/harness.hpp"
#include "dcc/models.hpp"
#include "dcc/special.hpp"

using namespace dcc;

TEST_CASE("gaussian log density") {
  CHECK(gaussian_logpdf(0.0, 0.0, 1.0) == doctest::Approx(-0.9189385332046727));
  CHECK(gaussian_logpdf(3.0, 3.0, 0.25) ==
        doctest::Approx(-0.5 * std::log(2 * M_PI * 0.25)));
  CHECK(gaussian_logpdf(2.0, 0.0, 4.0) ==
        doctest::Approx(-0.5 * std::log(8 * M_PI) - 0.5));
  CHECK_THROWS_AS(gaussian_logpdf(0.0, 0.0, 0.0), Error);
}

TEST_CASE("poisson log pmf") {
  CHECK(poisson_logpmf(0.0, 1.0) == doctest::Approx(-1.0));
  CHECK(poisson_logpmf(1.0, 1.0) == doctest::Approx(-1.0));
  CHECK(poisson_logpmf(3.0, 2.5) ==
        doctest::Approx(3.0 * std::log(2.5) - 2.5 - std::log(6.0)));
  CHECK_THROWS_AS(poisson_logpmf(-1.0, 1.0), Error);
  CHECK_THROWS_AS(poisson_logpmf(1.5, 1.0), Error);
}

TEST_CASE("negative binomial log pmf") {
  CHECK(negbin_logpmf(0.0, 3.0, 0.4) == doctest::Approx(3.0 * std::log(0.4)));
  CHECK(negbin_logpmf(1.0, 1.0, 0.5) == doctest::Approx(std::log(0.25)));
  // Normalization by direct summation.
  double total = 0.0;
  for (int y = 0; y <= 200; ++y) total += std::exp(negbin_logpmf(y, 2.0, 0.3));
  CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("negbin mean-variance conversion") {
  auto [r, p] = negbin_from_mean_var(2.0, 4.0);
  CHECK(r == doctest::Approx(2.0));
  CHECK(p == doctest::Approx(0.5));
  // r = 1/tau regardless of the mean: var = x + tau x^2.
  const double tau = 0.5;
  for (double x : {1.0, 10.0, 100.0}) {
    auto [rx, px] = negbin_from_mean_var(x, x + tau * x * x);
    CHECK(rx == doctest::Approx(1.0 / tau).epsilon(1e-12));
    CHECK(px == doctest::Approx(1.0 / (1.0 + tau * x)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(negbin_from_mean_var(2.0, 2.0), Error);
}

TEST_CASE("negbin sampler matches target moments, poisson limit") {
  Rng rng = RngKey::root(11).engine();
  // Small tau: variance/mean ratio approaches 1.
  const double x = 5.0, tau = 1e-4;
  auto [r, p] = negbin_from_mean_var(x, x + tau * x * x);
  double s = 0.0, s2 = 0.0;
  const int reps = 100000;
  for (int i = 0; i < reps; ++i) {
    double y = static_cast<double>(sample_negbin(rng, r, p));
    s += y;
    s2 += y * y;
  }
  double mean = s / reps, var = s2 / reps - mean * mean;
  CHECK(mean == doctest::Approx(x).epsilon(0.01));
  CHECK(var / mean == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("discrete model pmf normalization through incremental_logliks") {
  Dataset probe = Dataset::from_scalars({0.0});
  PoissonModel poisson;
  NegBinomialModel negbin;
  auto sum_pmf = [&](const ModelClass& m, ParamVector theta) {
    double total = 0.0;
    for (int y = 0; y <= 10000; ++y) {
      Dataset d = Dataset::from_scalars({static_cast<double>(y)});
      total += std::exp(m.incremental_logliks(theta, d)[0]);
    }
    return total;
  };
  CHECK(sum_pmf(poisson, poisson.make_params({3.7})) ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sum_pmf(negbin, negbin.make_params({1.6, 0.2})) ==
        doctest::Approx(1.0).epsilon(1e-6));
  (void)probe;
}

TEST_CASE("ar1 incremental log-likelihoods") {
  // a = 0 reduces to iid Gaussian.
  Dataset d = Dataset::from_scalars({0.3, -1.2, 0.7});
  auto z = ar1_incremental_logliks(0.0, 2.0, d);
  for (int i = 0; i < 3; ++i)
    CHECK(z[i] == doctest::Approx(gaussian_logpdf(d.scalar(i), 0.0, 2.0)));

  // Direct formula at the origin: stationary variance 1/(1-0.25) = 4/3.
  Dataset zero2 = Dataset::from_scalars({0.0, 0.0});
  auto z2 = ar1_incremental_logliks(0.5, 1.0, zero2);
  CHECK(z2[0] == doctest::Approx(-0.5 * std::log(2 * M_PI * 4.0 / 3.0)));
  CHECK(z2[1] == doctest::Approx(-0.5 * std::log(2 * M_PI)));

  CHECK_THROWS_AS(ar1_incremental_logliks(1.0, 1.0, d), Error);
}

TEST_CASE("ar1 telescoped likelihood equals bivariate normal density") {
  // n=2: (y1,y2) is zero-mean Gaussian with cov [[v, a v], [a v, v]],
  // v = s2/(1-a^2). Compare sum of z against the explicit 2-D density.
  const double a = 0.6, s2 = 1.7;
  const double v = s2 / (1.0 - a * a);
  Dataset d = Dataset::from_scalars({0.8, -0.5});
  auto z = ar1_incremental_logliks(a, s2, d);
  double det = v * v * (1.0 - a * a);
  double q = (d.scalar(0) * d.scalar(0) - 2 * a * d.scalar(0) * d.scalar(1) +
              d.scalar(1) * d.scalar(1)) /
             (v * (1.0 - a * a));
  double log_density = -std::log(2 * M_PI) - 0.5 * std::log(det) - 0.5 * q;
  CHECK(z[0] + z[1] == doctest::Approx(log_density).epsilon(1e-12));
}

TEST_CASE("gaussian model z moments match the analytic entropy value") {
  GaussianIidModel model(GaussianIidModel::Mode::Free);
  const double mu = 0.7, s2 = 2.3;
  ParamVector theta = model.make_params({mu, s2});
  Dataset tmpl = Dataset::from_scalars(std::vector<double>(4, 0.0));
  Rng rng = RngKey::root(5).engine();
  double s = 0.0;
  const int reps = 40000;
  for (int k = 0; k < reps; ++k) {
    Dataset sim = model.simulate(theta, tmpl, rng);
    auto z = model.incremental_logliks(theta, sim);
    s += std::accumulate(z.begin(), z.end(), 0.0) / z.size();
  }
  CHECK(s / reps ==
        doctest::Approx(-0.5 * std::log(2 * M_PI * s2) - 0.5).epsilon(0.005));
}

TEST_CASE("saturated ar generator stays above the floor") {
  Rng rng = RngKey::root(9).engine();
  for (int rep = 0; rep < 50; ++rep) {
    auto y = simulate_saturated_ar1(500, rng);
    REQUIRE(y.size() == 500);
    for (double v : y) CHECK(v >= -0.3);
  }
  CHECK_THROWS_AS(simulate_saturated_ar1(0, rng), Error);
}

TEST_CASE("geometric brownian transition drift identity") {
  // E[x_{t+D}/x_t] = E[exp(sigma sqrt(D) eps)] = exp(sigma^2 D / 2):
  // the SDE's sigma^2/2 drift exactly cancels the Ito correction.
  Rng rng = RngKey::root(21).engine();
  const double sigma = 0.2, delta = 1.0;
  double s = 0.0;
  const int reps = 100000;
  for (int i = 0; i < reps; ++i)
    s += std::exp(sigma * std::sqrt(delta) * sample_normal(rng));
  CHECK(s / reps ==
        doctest::Approx(std::exp(sigma * sigma * delta / 2.0)).epsilon(0.005));
}

TEST_CASE("ssm simulate: zero diffusion freezes the latent path") {
  KangarooSsmModel model(200);
  ParamVector theta = model.make_params({1e-9, 1e-5});
  std::vector<double> ts(8);
  for (int i = 0; i < 8; ++i) ts[i] = 1970.0 + 0.25 * i;
  Dataset tmpl = Dataset::from_flat(std::vector<double>(16, 0.0), 8, 2, ts);
  Rng rng = RngKey::root(31).engine();
  // With sigma ~ 0 and tau ~ 0 all counts are Poisson(x1) draws around a
  // shared constant path; their spread must look Poisson, not log-normal.
  for (int rep = 0; rep < 20; ++rep) {
    Dataset sim = model.simulate(theta, tmpl, rng);
    double mean = 0.0;
    for (int i = 0; i < sim.n(); ++i)
      mean += (sim.value(i, 0) + sim.value(i, 1)) / (2.0 * sim.n());
    if (mean < 10.0) continue;  // tiny x1: all counts near zero, skip
    for (int i = 0; i < sim.n(); ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(std::abs(sim.value(i, j) - mean) < 8.0 * std::sqrt(mean) + 3.0);
  }
}

TEST_CASE("particle filter n=1 matches naive monte carlo") {
  // z_1 = ln (1/K) sum NB(y | x_k), x_k from the initial log-normal; compare
  // against a plain Monte Carlo estimate of p(y_1).
  std::vector<double> ts = {0.0};
  Dataset data = Dataset::from_flat({4.0, 6.0}, 1, 2, ts);
  const double sigma = 0.5, tau = 0.3;
  Rng rng = RngKey::root(77).engine();
  double pf = kangaroo_particle_filter(sigma, tau, data, 400000, rng)[0];

  Rng mc_rng = RngKey::root(78).engine();
  const double r = 1.0 / tau;
  double acc = 0.0;
  const int reps = 1000000;
  for (int i = 0; i < reps; ++i) {
    double x = std::exp(5.0 * sample_normal(mc_rng));
    double p = 1.0 / (1.0 + tau * x);
    acc += std::exp(negbin_logpmf(4.0, r, p) + negbin_logpmf(6.0, r, p));
  }
  CHECK(std::abs(pf - std::log(acc / reps)) < 0.05);
}

TEST_CASE("particle filter n=2 joint likelihood covers the transition") {
  std::vector<double> ts = {0.0, 2.0};
  Dataset data = Dataset::from_flat({5.0, 5.0, 9.0, 7.0}, 2, 2, ts);
  const double sigma = 0.4, tau = 0.25;
  Rng rng = RngKey::root(101).engine();
  auto z = kangaroo_particle_filter(sigma, tau, data, 400000, rng);
  double pf = z[0] + z[1];

  Rng mc_rng = RngKey::root(102).engine();
  const double r = 1.0 / tau;
  double acc = 0.0;
  const int reps = 1000000;
  for (int i = 0; i < reps; ++i) {
    double x1 = std::exp(5.0 * sample_normal(mc_rng));
    double x2 = x1 * std::exp(sigma * std::sqrt(2.0) * sample_normal(mc_rng));
    double p1 = 1.0 / (1.0 + tau * x1), p2 = 1.0 / (1.0 + tau * x2);
    acc += std::exp(negbin_logpmf(5.0, r, p1) + negbin_logpmf(5.0, r, p1) +
                    negbin_logpmf(9.0, r, p2) + negbin_logpmf(7.0, r, p2));
  }
  CHECK(std::abs(pf - std::log(acc / reps)) < 0.05);
}

TEST_CASE("particle filter is stable on the real data at default K") {
  Dataset data = embedded_dataset("kangaroo");
  std::vector<double> sums;
  RngKey key = RngKey::root(55);
  for (int run = 0; run < 50; ++run) {
    Rng rng = key.child(run).engine();
    auto z = kangaroo_particle_filter(0.7, 0.08, data, 2000, rng);
    sums.push_back(std::accumulate(z.begin(), z.end(), 0.0));
  }
  double m = std::accumulate(sums.begin(), sums.end(), 0.0) / sums.size();
  double v = 0.0;
  for (double s : sums) v += (s - m) * (s - m);
  v /= (sums.size() - 1);
  CHECK(std::sqrt(v) < 1.0);
}

TEST_CASE("simulate then evaluate never produces NaN across the space") {
  Rng rng = RngKey::root(123).engine();
  auto fuzz = [&](const ModelClass& model, auto theta_gen, int reps,
                  const Dataset& tmpl) {
    for (int rep = 0; rep < reps; ++rep) {
      ParamVector theta = model.make_params(theta_gen(rng));
      Dataset sim = model.simulate(theta, tmpl, rng);
      auto z = model.incremental_logliks(theta, sim, &rng);
      for (double v : z) CHECK(std::isfinite(v));
    }
  };
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Dataset tmpl = Dataset::from_scalars(std::vector<double>(20, 0.0));

  GaussianIidModel gfree(GaussianIidModel::Mode::Free);
  fuzz(gfree, [&](Rng& r) {
    return std::vector<double>{4 * unif(r) - 2, 0.01 + 3 * unif(r)};
  }, 1000, tmpl);

  PoissonModel poisson;
  fuzz(poisson, [&](Rng& r) {
    return std::vector<double>{0.05 + 20 * unif(r)};
  }, 1000, tmpl);

  NegBinomialModel negbin;
  fuzz(negbin, [&](Rng& r) {
    return std::vector<double>{0.1 + 10 * unif(r), 0.05 + 0.9 * unif(r)};
  }, 1000, tmpl);

  LinearAr1Model ar1;
  fuzz(ar1, [&](Rng& r) {
    return std::vector<double>{1.9 * unif(r) - 0.95, 0.05 + 3 * unif(r)};
  }, 1000, tmpl);

  PolyRegressionModel poly(2, PolyRegressionModel::default_grid(20));
  fuzz(poly, [&](Rng& r) {
    return std::vector<double>{unif(r), unif(r), unif(r), 0.5 + 3 * unif(r)};
  }, 1000, tmpl);

  std::vector<double> ts(10);
  for (int i = 0; i < 10; ++i) ts[i] = 1970.0 + 0.3 * i;
  Dataset kt = Dataset::from_flat(std::vector<double>(20, 0.0), 10, 2, ts);
  KangarooSsmModel kangaroo(200);
  fuzz(kangaroo, [&](Rng& r) {
    return std::vector<double>{0.1 + 1.5 * unif(r), 0.02 + 0.5 * unif(r)};
  }, 50, kt);
}

TEST_CASE("model spec strings") {
  CHECK(make_model("gaussian-fixed")->name() == "gaussian-fixed");
  CHECK(make_model("gaussian")->name() == "gaussian");
  CHECK(make_model("poisson")->name() == "poisson");
  CHECK(make_model("negbin")->name() == "negbin");
  CHECK(make_model("ar1")->name() == "ar1");
  auto poly = make_model("polyreg:k=3", 50);
  CHECK(dynamic_cast<PolyRegressionModel*>(poly.get())->order() == 3);
  auto ssm = make_model("kangaroo-ssm:K=500");
  CHECK(dynamic_cast<KangarooSsmModel*>(ssm.get())->particles() == 500);
  CHECK_THROWS_AS(make_model("no-such-model"), Error);
}
