#include "dcc/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "dcc/errors.hpp"
#include "dcc/inference.hpp"
#include "dcc/parallel.hpp"

namespace dcc {

namespace {

// Child-stream layout. Fixed indices keep every simulation's stream a pure
// function of (master seed, draw index, replicate index).
enum : std::uint64_t {
  kMoments = 0,
  kTest = 1,
  kObserved = 2,
  kSimulate = 0,
  kLoglik = 1,
};

std::vector<double> replicate_logliks(const ModelClass& model,
                                      const ParamVector& theta,
                                      const Dataset& template_data,
                                      RngKey replicate_key) {
  Rng sim_rng = replicate_key.child(kSimulate).engine();
  Dataset sim = model.simulate(theta, template_data, sim_rng);
  Rng z_rng = replicate_key.child(kLoglik).engine();
  return model.incremental_logliks(theta, sim, &z_rng);
}

}  // namespace

MomentEstimates estimate_moments(const ModelClass& model,
                                 const ParamVector& theta,
                                 const Dataset& template_data, int m_cal,
                                 RngKey key, int threads, bool pool_iid) {
  if (m_cal < 2) throw invalid_input("estimate_moments requires M' >= 2");
  const int n = template_data.n();
  std::vector<std::vector<double>> z(m_cal);
  parallel_for(m_cal, threads, [&](int k) {
    z[k] = replicate_logliks(model, theta, template_data, key.child(k));
  });

  MomentEstimates out;
  out.replicates = m_cal;
  out.means.assign(n, 0.0);
  out.variances.assign(n, 0.0);
  if (pool_iid) {
    // All n * M' samples share one law; pool them for variance reduction.
    double mean = 0.0;
    for (const auto& zk : z)
      for (double v : zk) mean += v;
    const double count = static_cast<double>(n) * m_cal;
    mean /= count;
    double ss = 0.0;
    for (const auto& zk : z)
      for (double v : zk) ss += (v - mean) * (v - mean);
    double var = ss / (count - 1.0);
    std::fill(out.means.begin(), out.means.end(), mean);
    std::fill(out.variances.begin(), out.variances.end(), var);
  } else {
    for (int i = 0; i < n; ++i) {
      double mean = 0.0;
      for (int k = 0; k < m_cal; ++k) mean += z[k][i];
      mean /= m_cal;
      double ss = 0.0;
      for (int k = 0; k < m_cal; ++k) {
        double d = z[k][i] - mean;
        ss += d * d;
      }
      out.means[i] = mean;
      out.variances[i] = ss / (m_cal - 1.0);
    }
  }
  for (double v : out.variances) {
    if (v < kDegenerateVarianceFloor)
      throw numeric_error(
          "DegenerateVariance: a log-likelihood coordinate is (nearly) "
          "deterministic");
  }
  return out;
}

double statistic_T(const std::vector<double>& z,
                   const MomentEstimates& moments) {
  if (z.size() != moments.means.size() ||
      z.size() != moments.variances.size())
    throw invalid_input("LengthMismatch: z and moment vectors differ");
  double acc = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    double d = z[i] - moments.means[i];
    acc += d * d / moments.variances[i];
  }
  return acc / static_cast<double>(z.size());
}

double pfa_u_for_theta(const ModelClass& model, const ParamVector& theta,
                       const Dataset& observed, int m_test, int m_cal,
                       RngKey key, int threads, bool pool_iid,
                       double* t_obs_out) {
  if (m_test < 1) throw invalid_input("pfa_u_for_theta requires M >= 1");
  MomentEstimates moments = estimate_moments(model, theta, observed, m_cal,
                                             key.child(kMoments), threads,
                                             pool_iid);
  Rng obs_rng = key.child(kObserved).engine();
  std::vector<double> z_obs = model.incremental_logliks(theta, observed, &obs_rng);
  const double t_obs = statistic_T(z_obs, moments);
  if (t_obs_out) *t_obs_out = t_obs;

  RngKey test_key = key.child(kTest);
  std::vector<char> exceeds(m_test, 0);
  parallel_for(m_test, threads, [&](int l) {
    auto z = replicate_logliks(model, theta, observed, test_key.child(l));
    exceeds[l] = statistic_T(z, moments) > t_obs ? 1 : 0;
  });
  long count = std::count(exceeds.begin(), exceeds.end(), 1);
  return static_cast<double>(count) / static_cast<double>(m_test);
}

DccResult dcc(const ModelClass& model, WeightSampler& weights,
              const Dataset& observed, const DccConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  RngKey root = RngKey::root(config.seed);

  std::vector<ParamVector> draws = weights.draw(config.n_theta, root.child(0));
  if (static_cast<int>(draws.size()) != config.n_theta)
    throw numeric_error("WeightSamplerFailure: expected " +
                        std::to_string(config.n_theta) + " draws, got " +
                        std::to_string(draws.size()));

  DccResult result;
  result.config = config;
  result.pfa_u_per_draw.assign(config.n_theta, 0.0);
  result.t_obs_per_draw.assign(config.n_theta, 0.0);
  RngKey draw_key = root.child(1);
  parallel_for(config.n_theta, config.threads, [&](int j) {
    result.pfa_u_per_draw[j] = pfa_u_for_theta(
        model, draws[j], observed, config.m_test, config.m_cal,
        draw_key.child(j), config.threads, config.pool_iid_moments,
        &result.t_obs_per_draw[j]);
  });

  // Ordered reduction by index, independent of scheduling.
  double sum = 0.0;
  for (double v : result.pfa_u_per_draw) sum += v;
  result.pfa_u_star_hat = sum / config.n_theta;
  result.pfa_star_hat =
      std::min(result.pfa_u_star_hat, 1.0 - result.pfa_u_star_hat);
  result.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

double threshold_exact(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0))
    throw invalid_input("threshold_exact requires rho in [0,1]");
  return 0.5 * rho;
}

double calibrate_threshold(const ModelClass& model,
                           const ParamVector& generator_theta, int n,
                           double rho, int reps,
                           const WeightSamplerFactory& weights_factory,
                           const DccConfig& config, RngKey key,
                           std::vector<double>* null_pfa_out) {
  if (reps < 100) throw invalid_input("calibrate_threshold requires reps >= 100");
  if (n < 1) throw invalid_input("calibrate_threshold requires n >= 1");
  Dataset template_data = Dataset::from_flat(
      std::vector<double>(static_cast<std::size_t>(n) * model.data_dim(), 0.0),
      n, model.data_dim());

  std::vector<double> pfa(reps, 0.0);
  parallel_for(reps, config.threads, [&](int r) {
    RngKey rep_key = key.child(r);
    Rng sim_rng = rep_key.child(0).engine();
    Dataset sim = model.simulate(generator_theta, template_data, sim_rng);
    auto sampler = weights_factory(sim, rep_key.child(1));
    DccConfig cfg = config;
    cfg.seed = rep_key.child(2).raw();
    cfg.threads = 1;
    pfa[r] = dcc(model, *sampler, sim, cfg).pfa_star_hat;
  });
  if (null_pfa_out) *null_pfa_out = pfa;
  std::sort(pfa.begin(), pfa.end());
  // Empirical rho-quantile; with the strict rejection rule pfa* < t this
  // achieves a false-rejection rate of about k/(reps+1).
  int k = static_cast<int>(std::floor(rho * reps)) + 1;
  k = std::clamp(k, 1, reps);
  return pfa[k - 1];
}

}  // namespace dcc
