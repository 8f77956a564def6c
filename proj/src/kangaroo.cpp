#include <cmath>
#include <limits>

#include "dcc/distributions.hpp"
#include "dcc/errors.hpp"
#include "dcc/models.hpp"
#include "dcc/special.hpp"

namespace dcc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInitLogSd = 5.0;  // ln x_1 ~ N(0, 5^2)

void require_kangaroo_data(const Dataset& data) {
  if (data.dim() != 2)
    throw invalid_input("kangaroo model requires bivariate data");
  if (!data.has_timestamps())
    throw invalid_input("kangaroo model requires timestamps");
}

// ln(1 + exp(a)), overflow-safe.
double log1p_exp(double a) {
  if (a > 36.0) return a;
  if (a < -36.0) return std::exp(a);
  return std::log1p(std::exp(a));
}

}  // namespace

KangarooSsmModel::KangarooSsmModel(int particles)
    : particles_(particles),
      space_(std::make_shared<const ParamSpace>(std::vector<ParamSpace::Coord>{
          {"sigma", 0.0, kInf}, {"tau", 0.0, kInf}})) {
  if (particles_ < 1) throw invalid_input("particle count must be >= 1");
}

Dataset KangarooSsmModel::simulate(const ParamVector& theta,
                                   const Dataset& template_data,
                                   Rng& rng) const {
  require_kangaroo_data(template_data);
  const double sigma = theta[0], tau = theta[1];
  const double r = 1.0 / tau;  // NB(mean x, var x + tau x^2) has r = 1/tau
  const int n = template_data.n();
  std::vector<double> flat(static_cast<std::size_t>(n) * 2);
  std::normal_distribution<double> normal(0.0, 1.0);
  double lx = kInitLogSd * normal(rng);
  for (int i = 0; i < n; ++i) {
    if (i > 0) {
      // Exact geometric-Brownian transition over the timestamp gap: the
      // drift sigma^2/2 cancels the Ito correction, so d ln x = sigma dW.
      double dt = template_data.timestamp(i) - template_data.timestamp(i - 1);
      lx += sigma * std::sqrt(dt) * normal(rng);
    }
    double x = std::exp(lx);
    // Gamma-Poisson mixture with shape r and scale tau*x gives the
    // NB(mean x, var x + tau x^2) counts.
    for (int j = 0; j < 2; ++j) {
      double mix = sample_gamma(rng, r, tau * x);
      flat[static_cast<std::size_t>(i) * 2 + j] =
          mix > 0.0 ? static_cast<double>(sample_poisson(rng, mix)) : 0.0;
    }
  }
  return Dataset::from_flat(std::move(flat), n, 2, template_data.timestamps());
}

std::vector<double> kangaroo_particle_filter(double sigma, double tau,
                                             const Dataset& data, int particles,
                                             Rng& rng) {
  require_kangaroo_data(data);
  if (!(sigma > 0.0 && tau > 0.0))
    throw invalid_input("kangaroo model requires sigma > 0 and tau > 0");
  const int n = data.n();
  const int K = particles;
  const double r = 1.0 / tau;
  const double ltau = std::log(tau);
  const double lgamma_r = lgamma_lanczos(r);
  const double log_k = std::log(static_cast<double>(K));

  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::vector<double> lx(K), lx_next(K), logw(K), w(K), cdf(K);
  for (int k = 0; k < K; ++k) lx[k] = kInitLogSd * normal(rng);

  std::vector<double> z(n);
  for (int i = 0; i < n; ++i) {
    if (i > 0) {
      double step = sigma * std::sqrt(data.timestamp(i) - data.timestamp(i - 1));
      for (int k = 0; k < K; ++k) lx[k] += step * normal(rng);
    }
    const double y1 = data.value(i, 0), y2 = data.value(i, 1);
    if (y1 < 0 || y2 < 0 || y1 != std::floor(y1) || y2 != std::floor(y2))
      throw invalid_input("NonIntegerCount: kangaroo data must be counts");
    // Particle-independent part of the two NB log-pmfs.
    const double base = lgamma_lanczos(y1 + r) + lgamma_lanczos(y2 + r) -
                        2.0 * lgamma_r - lgamma_lanczos(y1 + 1.0) -
                        lgamma_lanczos(y2 + 1.0);
    const double ysum = y1 + y2;
    double max_lw = -kInf;
    for (int k = 0; k < K; ++k) {
      // With u = tau*x: ln p = -ln(1+u), ln(1-p) = ln u - ln(1+u).
      double lu = ltau + lx[k];
      double l1pu = log1p_exp(lu);
      double lw = base + ysum * lu - (2.0 * r + ysum) * l1pu;
      logw[k] = lw;
      if (lw > max_lw) max_lw = lw;
    }
    if (!(max_lw > -kInf) || std::isnan(max_lw))
      throw numeric_error("ParticleCollapse: all particle weights vanished");
    double sum_w = 0.0;
    for (int k = 0; k < K; ++k) {
      w[k] = std::exp(logw[k] - max_lw);
      sum_w += w[k];
      cdf[k] = sum_w;
    }
    z[i] = max_lw + std::log(sum_w) - log_k;

    // Multinomial resampling via uniform order statistics (exponential
    // spacings), O(K) without sorting.
    double total = 0.0;
    int idx = 0;
    for (int k = 0; k < K; ++k) {
      total += -std::log1p(-unif(rng));  // Exp(1)
      // Placeholder; points are scaled after the final spacing below.
      lx_next[k] = total;
    }
    total += -std::log1p(-unif(rng));
    double scale = sum_w / total;
    for (int k = 0; k < K; ++k) {
      double point = lx_next[k] * scale;  // sorted uniform in (0, sum_w)
      while (idx < K - 1 && cdf[idx] < point) ++idx;
      lx_next[k] = lx[idx];
    }
    lx.swap(lx_next);
  }
  return z;
}

std::vector<double> KangarooSsmModel::incremental_logliks(
    const ParamVector& theta, const Dataset& data, Rng* rng) const {
  if (!rng)
    throw invalid_input(
        "kangaroo incremental log-likelihoods are stochastic; rng required");
  return kangaroo_particle_filter(theta[0], theta[1], data, particles_, *rng);
}

}  // namespace dcc
