#ifndef DCC_DISTRIBUTIONS_HPP
#define DCC_DISTRIBUTIONS_HPP

#include <utility>

#include "dcc/rng.hpp"

namespace dcc {

// Log densities. All probabilities are carried in log space; callers
// exponentiate only for reporting.

// -0.5 ln(2 pi s2) - (y - mu)^2 / (2 s2); requires s2 > 0.
double gaussian_logpdf(double y, double mu, double s2);

// y ln(lambda) - lambda - lnGamma(y+1); requires lambda > 0 and y a
// nonnegative integer value.
double poisson_logpmf(double y, double lambda);

// lnGamma(y+r) - lnGamma(r) - lnGamma(y+1) + r ln(p) + y ln(1-p);
// requires r > 0, p in (0,1), y a nonnegative integer value.
double negbin_logpmf(double y, double r, double p);

// Mean-variance to (r, p) conversion: p = mean/var, r = mean^2/(var-mean).
// Requires var > mean > 0.
std::pair<double, double> negbin_from_mean_var(double mean, double var);

// Samplers, all driven by an explicit engine.
double sample_normal(Rng& rng, double mu = 0.0, double sd = 1.0);
double sample_uniform(Rng& rng, double lo = 0.0, double hi = 1.0);
long sample_poisson(Rng& rng, double lambda);
double sample_gamma(Rng& rng, double shape, double scale);
// Gamma-Poisson mixture: Poisson(Gamma(r, (1-p)/p)).
long sample_negbin(Rng& rng, double r, double p);

}  // namespace dcc

#endif  // DCC_DISTRIBUTIONS_HPP
