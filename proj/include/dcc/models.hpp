#ifndef DCC_MODELS_HPP
#define DCC_MODELS_HPP

#include <memory>
#include <string>
#include <vector>

#include "dcc/model.hpp"

namespace dcc {

// IID Gaussian data. Fixed mode is the single model N(0,1) with an empty
// parameter space; free mode has theta = (mu, sigma2), sigma2 > 0.
class GaussianIidModel : public ModelClass {
 public:
  enum class Mode { Fixed, Free };
  explicit GaussianIidModel(Mode mode);

  std::string name() const override;
  std::shared_ptr<const ParamSpace> param_space() const override { return space_; }
  int data_dim() const override { return 1; }
  Dataset simulate(const ParamVector& theta, const Dataset& template_data,
                   Rng& rng) const override;
  std::vector<double> incremental_logliks(const ParamVector& theta,
                                          const Dataset& data,
                                          Rng* rng = nullptr) const override;
  Mode mode() const { return mode_; }

 private:
  Mode mode_;
  std::shared_ptr<const ParamSpace> space_;
};

// IID Poisson counts, theta = (lambda), lambda > 0.
class PoissonModel : public ModelClass {
 public:
  PoissonModel();
  std::string name() const override { return "poisson"; }
  std::shared_ptr<const ParamSpace> param_space() const override { return space_; }
  int data_dim() const override { return 1; }
  Dataset simulate(const ParamVector& theta, const Dataset& template_data,
                   Rng& rng) const override;
  std::vector<double> incremental_logliks(const ParamVector& theta,
                                          const Dataset& data,
                                          Rng* rng = nullptr) const override;

 private:
  std::shared_ptr<const ParamSpace> space_;
};

// IID negative binomial counts, theta = (r, p), r > 0, p in (0,1).
class NegBinomialModel : public ModelClass {
 public:
  NegBinomialModel();
  std::string name() const override { return "negbin"; }
  std::shared_ptr<const ParamSpace> param_space() const override { return space_; }
  int data_dim() const override { return 1; }
  Dataset simulate(const ParamVector& theta, const Dataset& template_data,
                   Rng& rng) const override;
  std::vector<double> incremental_logliks(const ParamVector& theta,
                                          const Dataset& data,
                                          Rng* rng = nullptr) const override;

 private:
  std::shared_ptr<const ParamSpace> space_;
};

// Polynomial regression with iid Gaussian noise on a fixed covariate grid.
// theta = (beta_0 .. beta_k, sigma2).
class PolyRegressionModel : public ModelClass {
 public:
  PolyRegressionModel(int order, std::vector<double> covariates);
  // Default grid: n equally spaced points on [-25, 25].
  static std::vector<double> default_grid(int n);

  std::string name() const override;
  std::shared_ptr<const ParamSpace> param_space() const override { return space_; }
  int data_dim() const override { return 1; }
  int order() const { return order_; }
  const std::vector<double>& covariates() const { return covariates_; }
  double predict(const ParamVector& theta, double x) const;
  Dataset simulate(const ParamVector& theta, const Dataset& template_data,
                   Rng& rng) const override;
  std::vector<double> incremental_logliks(const ParamVector& theta,
                                          const Dataset& data,
                                          Rng* rng = nullptr) const override;

 private:
  int order_;
  std::vector<double> covariates_;
  std::shared_ptr<const ParamSpace> space_;
};

// First-order linear autoregression, theta = (a, sigma2) with |a| < 1.
// z_1 uses the stationary law N(0, sigma2/(1-a^2)).
class LinearAr1Model : public ModelClass {
 public:
  LinearAr1Model();
  std::string name() const override { return "ar1"; }
  std::shared_ptr<const ParamSpace> param_space() const override { return space_; }
  int data_dim() const override { return 1; }
  Dataset simulate(const ParamVector& theta, const Dataset& template_data,
                   Rng& rng) const override;
  std::vector<double> incremental_logliks(const ParamVector& theta,
                                          const Dataset& data,
                                          Rng* rng = nullptr) const override;

 private:
  std::shared_ptr<const ParamSpace> space_;
};

// Free function: incremental log-likelihoods of the AR(1) model.
std::vector<double> ar1_incremental_logliks(double a, double sigma2,
                                            const Dataset& data);

// Saturated AR(1) data generator (no likelihood):
// y_i = max(0.7 y_{i-1} + e_i, -0.3), e_i ~ N(0,1), y_0 = 0.
std::vector<double> simulate_saturated_ar1(int n, Rng& rng);

// Kangaroo population state-space model: geometric Brownian latent path
// (exact transition x_{t+D} = x_t exp(sigma sqrt(D) eps)), initial state
// ln x_1 ~ N(0, 5^2), and two iid negative binomial counts per time with mean
// x_t and variance x_t + tau x_t^2. theta = (sigma, tau), both positive.
// Incremental log-likelihoods are bootstrap particle-filter estimates.
class KangarooSsmModel : public ModelClass {
 public:
  explicit KangarooSsmModel(int particles = 2000);

  std::string name() const override { return "kangaroo-ssm"; }
  std::shared_ptr<const ParamSpace> param_space() const override { return space_; }
  int data_dim() const override { return 2; }
  int particles() const { return particles_; }
  bool is_exact_likelihood() const override { return false; }

  Dataset simulate(const ParamVector& theta, const Dataset& template_data,
                   Rng& rng) const override;
  std::vector<double> incremental_logliks(const ParamVector& theta,
                                          const Dataset& data,
                                          Rng* rng = nullptr) const override;

 private:
  int particles_;
  std::shared_ptr<const ParamSpace> space_;
};

// Bootstrap particle filter with multinomial resampling at every step.
// Returns per-step log estimates ln((1/K) sum of observation likelihoods).
// Throws a numeric error on particle collapse (never returns NaN).
std::vector<double> kangaroo_particle_filter(double sigma, double tau,
                                             const Dataset& data, int particles,
                                             Rng& rng);

// Builds a model from its CLI specification string: gaussian-fixed,
// gaussian, poisson, negbin, polyreg:k=<order>, ar1, kangaroo-ssm:K=<n>.
// The regression grid length must be supplied for polyreg.
std::unique_ptr<ModelClass> make_model(const std::string& spec, int n_hint = 50);

}  // namespace dcc

#endif  // DCC_MODELS_HPP
