#ifndef DCC_ENGINE_HPP
#define DCC_ENGINE_HPP

#include <functional>
#include <memory>
#include <vector>

#include "dcc/model.hpp"
#include "dcc/rng.hpp"

namespace dcc {

class WeightSampler;

// Coordinates below this variance floor signal a deterministic likelihood
// coordinate and raise an error instead of producing huge statistics.
inline constexpr double kDegenerateVarianceFloor = 1e-12;

// Per-index sample moments of simulated incremental log-likelihoods.
struct MomentEstimates {
  std::vector<double> means;      // m_1 .. m_n
  std::vector<double> variances;  // v_1 .. v_n, unbiased (M'-1 denominator)
  int replicates = 0;             // M'
};

// Simulates m_cal datasets at theta, evaluates their z vectors, and returns
// per-index sample means and variances. Each replicate k draws its streams
// from key.child(k).
MomentEstimates estimate_moments(const ModelClass& model,
                                 const ParamVector& theta,
                                 const Dataset& template_data, int m_cal,
                                 RngKey key, int threads = 0,
                                 bool pool_iid = false);

// T = (1/n) sum_i (z_i - m_i)^2 / v_i.
double statistic_T(const std::vector<double>& z, const MomentEstimates& moments);

// Fraction of m_test freshly simulated datasets whose statistic strictly
// exceeds the observed one; ties count as "not greater". Moment-calibration
// and test replicates use disjoint RNG streams.
double pfa_u_for_theta(const ModelClass& model, const ParamVector& theta,
                       const Dataset& observed, int m_test, int m_cal,
                       RngKey key, int threads = 0, bool pool_iid = false,
                       double* t_obs_out = nullptr);

// The full criterion: draws N parameters from the weight sampler, averages
// pfa_u over them, and returns min(pfa_u_star, 1 - pfa_u_star).
// Deterministic given (config.seed, inputs) at any worker count.
DccResult dcc(const ModelClass& model, WeightSampler& weights,
              const Dataset& observed, const DccConfig& config);

// Rejection threshold for a target false-rejection rate rho, valid only for
// model classes with no free parameters (pfa_u uniform, so the min lives on
// [0, 0.5]).
double threshold_exact(double rho);

using WeightSamplerFactory =
    std::function<std::unique_ptr<WeightSampler>(const Dataset&, RngKey)>;

// Simulates `reps` datasets of size n from the model at generator_theta,
// runs the criterion on each, and returns the empirical rho-quantile of the
// resulting pfa_star values. Rejection rule: pfa_star < threshold.
double calibrate_threshold(const ModelClass& model,
                           const ParamVector& generator_theta, int n,
                           double rho, int reps,
                           const WeightSamplerFactory& weights_factory,
                           const DccConfig& config, RngKey key,
                           std::vector<double>* null_pfa_out = nullptr);

}  // namespace dcc

#endif  // DCC_ENGINE_HPP
