#ifndef DCC_MODEL_HPP
#define DCC_MODEL_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dcc/dataset.hpp"
#include "dcc/params.hpp"
#include "dcc/rng.hpp"

namespace dcc {

// Behavioral interface: anything that can simulate data and evaluate
// incremental log-likelihoods z_i = ln p(y_i | y_1..y_{i-1}, theta).
// Implementations are immutable and reentrant; concurrent calls with
// distinct rng streams must not interfere.
class ModelClass {
 public:
  virtual ~ModelClass() = default;

  virtual std::string name() const = 0;
  virtual std::shared_ptr<const ParamSpace> param_space() const = 0;
  virtual int data_dim() const = 0;

  // Generates a dataset with the same n, d, and timestamps as template_data.
  virtual Dataset simulate(const ParamVector& theta,
                           const Dataset& template_data, Rng& rng) const = 0;

  // (z_1, ..., z_n). rng is consumed only by models whose z_i are Monte
  // Carlo estimates (is_exact_likelihood() == false); exact models ignore it.
  virtual std::vector<double> incremental_logliks(const ParamVector& theta,
                                                  const Dataset& data,
                                                  Rng* rng = nullptr) const = 0;

  virtual bool is_exact_likelihood() const { return true; }

  // Sum of incremental log-likelihoods; the natural MH target.
  double loglik(const ParamVector& theta, const Dataset& data,
                Rng* rng = nullptr) const;

  ParamVector make_params(std::vector<double> values) const;
};

enum class WeightMode { PointMle, Mh, Pmmh };

struct MhSettings {
  int burn_in = 1000;
  // 0 = automatic: chosen so N draws span at least 10*N MH steps.
  int thin = 0;
  // Multiplier on the curvature-derived per-coordinate proposal scales.
  double scale = 1.0;
};

struct DccConfig {
  int n_theta = 200;   // N, parameter draws
  int m_test = 200;    // M, test replicates
  int m_cal = 200;     // M', moment-calibration replicates
  std::uint64_t seed = 1;
  WeightMode weight_mode = WeightMode::PointMle;
  MhSettings mh;
  int particles = 2000;  // K, particle-filter size for latent-variable models
  bool pool_iid_moments = false;
  int threads = 0;  // 0 = hardware concurrency

  void validate() const;  // N >= 1, M >= 2, M' >= 2
};

struct DccResult {
  std::vector<double> pfa_u_per_draw;  // N values in [0, 1]
  std::vector<double> t_obs_per_draw;  // N nonnegative values
  double pfa_u_star_hat = 0.0;         // mean of pfa_u_per_draw
  double pfa_star_hat = 0.0;           // min(pfa_u_star, 1 - pfa_u_star)
  DccConfig config;
  double elapsed_seconds = 0.0;
};

}  // namespace dcc

#endif  // DCC_MODEL_HPP
