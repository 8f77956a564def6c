#ifndef DCC_INFERENCE_HPP
#define DCC_INFERENCE_HPP

#include <memory>
#include <utility>
#include <vector>

#include "dcc/dataset.hpp"
#include "dcc/model.hpp"
#include "dcc/models.hpp"

namespace dcc {

// Produces N parameter draws approximating the likelihood-proportional
// weights w(theta | y). Point-mass, Metropolis-Hastings, or particle
// marginal Metropolis-Hastings back-ends.
class WeightSampler {
 public:
  virtual ~WeightSampler() = default;
  virtual std::vector<ParamVector> draw(int n, RngKey key) = 0;
  // Acceptance rate of the most recent draw(); 1 for point samplers.
  virtual double acceptance_rate() const { return 1.0; }
  // Set after draw() when acceptance leaves [0.1, 0.6].
  virtual bool acceptance_warning() const { return false; }
};

// Maximum-likelihood fitters.

// mu = sample mean, sigma2 = (1/n) sum (y - mu)^2. Requires n >= 2, d = 1.
std::pair<double, double> mle_gaussian(const Dataset& data);

// lambda = sample mean. Requires nonnegative integer data, not all zero.
double mle_poisson(const Dataset& data);

// Profile-likelihood Newton iteration in ln r with p = r/(r + mean);
// requires sample variance > sample mean.
std::pair<double, double> mle_negbin(const Dataset& data);

// Least squares by Householder QR; sigma2 = RSS/n. Returns (beta, sigma2).
std::pair<std::vector<double>, double> mle_polyreg(
    const Dataset& data, const std::vector<double>& covariates, int order);

// Exact-likelihood AR(1) fit by golden-section search on a in
// (-0.999, 0.999) with sigma2 profiled in closed form.
std::pair<double, double> mle_ar1(const Dataset& data);

// MLE for any built-in exact-likelihood model, dispatching to the fitters
// above. Returns a validated ParamVector in the model's space.
ParamVector fit_mle(const ModelClass& model, const Dataset& data);

// Point-mass weights at a fixed parameter (the MLE shortcut, N copies).
std::unique_ptr<WeightSampler> point_weight_sampler(ParamVector theta);

// Random-walk Metropolis-Hastings on the unconstrained reparameterization
// (log for positive coordinates, scaled logit for bounded ones) targeting
// w(theta | y) with flat initial weights. The chain starts at the MLE;
// proposal scales default to 2.38/sqrt(dim) times a finite-difference
// curvature estimate. For a zero-dimensional space this degenerates to the
// point sampler at the model's fixed parameter.
std::unique_ptr<WeightSampler> mh_weight_sampler(const ModelClass& model,
                                                 const Dataset& data,
                                                 const MhSettings& settings = {});

// Particle marginal Metropolis-Hastings for the kangaroo model: the MH
// acceptance ratio uses particle-filter log-likelihood estimates, with the
// current state's estimate retained between proposals.
class PmmhWeightSampler : public WeightSampler {
 public:
  PmmhWeightSampler(const KangarooSsmModel& model, const Dataset& data,
                    int particles, const MhSettings& settings = {});
  std::vector<ParamVector> draw(int n, RngKey key) override;
  double acceptance_rate() const override { return acceptance_rate_; }
  bool acceptance_warning() const override { return warning_; }
  // Number of particle-filter likelihood evaluations in the last draw();
  // exactly one per proposal plus one for the initial state.
  long likelihood_evals() const { return likelihood_evals_; }

 private:
  const KangarooSsmModel& model_;
  const Dataset& data_;
  int particles_;
  MhSettings settings_;
  double acceptance_rate_ = 0.0;
  bool warning_ = false;
  long likelihood_evals_ = 0;
};

std::unique_ptr<WeightSampler> pmmh_weight_sampler(
    const KangarooSsmModel& model, const Dataset& data, int particles,
    const MhSettings& settings = {});

// Weight sampler selected by config.weight_mode for a model/data pair.
std::unique_ptr<WeightSampler> make_weight_sampler(const ModelClass& model,
                                                   const Dataset& data,
                                                   const DccConfig& config);

}  // namespace dcc

#endif  // DCC_INFERENCE_HPP
