#ifndef DCC_SPECIAL_HPP
#define DCC_SPECIAL_HPP

namespace dcc {

// ln Gamma(x) for x > 0, Lanczos approximation (g=7, n=9 coefficients),
// relative error below 1e-10 over the usable range. Thread-safe, unlike
// std::lgamma with its global sign variable.
double lgamma_lanczos(double x);

// Digamma psi(x) for x > 0, asymptotic expansion with upward recurrence.
double digamma(double x);

// Standard normal CDF Phi(x), absolute error < 1e-12.
double std_normal_cdf(double x);

// Standard normal quantile Phi^{-1}(p), p in (0,1).
double std_normal_quantile(double p);

// Regularized upper incomplete gamma Q(a, x), series/continued-fraction
// split at x = a + 1. Relative error below 1e-10.
double gamma_q(double a, double x);

// Upper tail of the chi-squared distribution with k degrees of freedom:
// Q(k/2, x/2). Domain: x >= 0, k >= 1.
double chi2_sf(double x, int k);

}  // namespace dcc

#endif  // DCC_SPECIAL_HPP
