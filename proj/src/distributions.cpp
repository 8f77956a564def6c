#include "dcc/distributions.hpp"

#include <cmath>

#include "dcc/errors.hpp"
#include "dcc/special.hpp"

namespace dcc {

namespace {

constexpr double kLn2Pi = 1.8378770664093454836;

void check_count(double y) {
  if (y < 0.0) throw invalid_input("NegativeCount: y must be >= 0");
  if (y != std::floor(y))
    throw invalid_input("NonIntegerCount: count models require integer data");
}

}  // namespace

double gaussian_logpdf(double y, double mu, double s2) {
  if (!(s2 > 0.0)) throw invalid_input("NonPositiveVariance");
  double d = y - mu;
  return -0.5 * (kLn2Pi + std::log(s2)) - d * d / (2.0 * s2);
}

double poisson_logpmf(double y, double lambda) {
  if (!(lambda > 0.0)) throw invalid_input("poisson_logpmf requires lambda > 0");
  check_count(y);
  return y * std::log(lambda) - lambda - lgamma_lanczos(y + 1.0);
}

double negbin_logpmf(double y, double r, double p) {
  if (!(r > 0.0) || !(p > 0.0 && p < 1.0))
    throw invalid_input("negbin_logpmf requires r > 0 and p in (0,1)");
  check_count(y);
  return lgamma_lanczos(y + r) - lgamma_lanczos(r) - lgamma_lanczos(y + 1.0) +
         r * std::log(p) + y * std::log1p(-p);
}

std::pair<double, double> negbin_from_mean_var(double mean, double var) {
  if (!(mean > 0.0) || !(var > mean))
    throw invalid_input("UnderdispersedParameters: requires var > mean > 0");
  double p = mean / var;
  double r = mean * mean / (var - mean);
  return {r, p};
}

double sample_normal(Rng& rng, double mu, double sd) {
  std::normal_distribution<double> dist(mu, sd);
  return dist(rng);
}

double sample_uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(rng);
}

long sample_poisson(Rng& rng, double lambda) {
  std::poisson_distribution<long> dist(lambda);
  return dist(rng);
}

double sample_gamma(Rng& rng, double shape, double scale) {
  std::gamma_distribution<double> dist(shape, scale);
  return dist(rng);
}

long sample_negbin(Rng& rng, double r, double p) {
  double mix = sample_gamma(rng, r, (1.0 - p) / p);
  if (mix <= 0.0) return 0;
  return sample_poisson(rng, mix);
}

}  // namespace dcc
