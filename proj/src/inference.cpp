#include "dcc/inference.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "dcc/distributions.hpp"
#include "dcc/errors.hpp"
#include "dcc/special.hpp"

namespace dcc {

namespace {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void require_counts(const std::vector<double>& y) {
  for (double v : y) {
    if (v < 0.0) throw invalid_input("NegativeCount");
    if (v != std::floor(v)) throw invalid_input("NonIntegerCount");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Maximum-likelihood fitters

std::pair<double, double> mle_gaussian(const Dataset& data) {
  if (data.dim() != 1 || data.n() < 2)
    throw invalid_input("mle_gaussian requires univariate data with n >= 2");
  auto y = data.scalars();
  double mu = mean_of(y);
  double ss = 0.0;
  for (double v : y) ss += (v - mu) * (v - mu);
  double s2 = ss / static_cast<double>(y.size());
  if (s2 <= 0.0) throw numeric_error("ZeroVariance: all data points equal");
  return {mu, s2};
}

double mle_poisson(const Dataset& data) {
  if (data.dim() != 1) throw invalid_input("mle_poisson requires univariate data");
  auto y = data.scalars();
  require_counts(y);
  double lambda = mean_of(y);
  if (lambda <= 0.0) throw numeric_error("AllZeroCounts");
  return lambda;
}

std::pair<double, double> mle_negbin(const Dataset& data) {
  if (data.dim() != 1 || data.n() < 2)
    throw invalid_input("mle_negbin requires univariate data with n >= 2");
  auto y = data.scalars();
  require_counts(y);
  const double n = static_cast<double>(y.size());
  const double m = mean_of(y);
  double ss = 0.0;
  for (double v : y) ss += (v - m) * (v - m);
  const double var = ss / (n - 1.0);
  if (!(var > m))
    throw numeric_error("Underdispersed: sample variance <= mean, Poisson adequate");

  // Profile score in s = ln r; p is profiled as p(r) = r/(r+mean).
  auto score = [&](double s) {
    double r = std::exp(s);
    double g = 0.0;
    for (double v : y) g += digamma(v + r);
    g -= n * digamma(r);
    g += n * std::log(r / (r + m));
    return r * g;  // chain rule d/ds = r d/dr
  };

  double s = std::log(m * m / (var - m));  // method-of-moments start
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    double g = score(s);
    const double h = 1e-5;
    double dg = (score(s + h) - score(s - h)) / (2.0 * h);
    if (!(std::fabs(dg) > 0.0)) break;
    double step = g / dg;
    if (!std::isfinite(step)) break;
    step = std::clamp(step, -1.0, 1.0);  // damped in ln r
    s -= step;
    if (std::fabs(step) < 1e-8) {
      converged = true;
      break;
    }
  }
  if (!converged) throw numeric_error("NoConvergence: negbin MLE did not converge");
  double r = std::exp(s);
  return {r, r / (r + m)};
}

std::pair<std::vector<double>, double> mle_polyreg(
    const Dataset& data, const std::vector<double>& covariates, int order) {
  if (data.dim() != 1) throw invalid_input("mle_polyreg requires univariate data");
  const int n = data.n();
  const int p = order + 1;
  if (n <= p)
    throw invalid_input("mle_polyreg requires n > order + 1");
  if (static_cast<int>(covariates.size()) != n)
    throw invalid_input("covariate grid length must equal n");

  // Householder QR of the Vandermonde design; normal equations would square
  // the condition number (x^3 up to 25^3 already conditions badly).
  std::vector<std::vector<double>> a(n, std::vector<double>(p));
  for (int i = 0; i < n; ++i) {
    double pw = 1.0;
    for (int j = 0; j < p; ++j) {
      a[i][j] = pw;
      pw *= covariates[i];
    }
  }
  std::vector<double> b = data.scalars();

  for (int j = 0; j < p; ++j) {
    double norm = 0.0;
    for (int i = j; i < n; ++i) norm += a[i][j] * a[i][j];
    norm = std::sqrt(norm);
    if (norm < 1e-12)
      throw numeric_error("RankDeficientDesign: Vandermonde column collapse");
    double alpha = a[j][j] > 0 ? -norm : norm;
    std::vector<double> v(n, 0.0);
    v[j] = a[j][j] - alpha;
    for (int i = j + 1; i < n; ++i) v[i] = a[i][j];
    double vtv = 0.0;
    for (int i = j; i < n; ++i) vtv += v[i] * v[i];
    if (vtv < 1e-300)
      throw numeric_error("RankDeficientDesign");
    for (int c = j; c < p; ++c) {
      double dot = 0.0;
      for (int i = j; i < n; ++i) dot += v[i] * a[i][c];
      double f = 2.0 * dot / vtv;
      for (int i = j; i < n; ++i) a[i][c] -= f * v[i];
    }
    double dot = 0.0;
    for (int i = j; i < n; ++i) dot += v[i] * b[i];
    double f = 2.0 * dot / vtv;
    for (int i = j; i < n; ++i) b[i] -= f * v[i];
  }

  // Back substitution on the p x p upper triangle.
  std::vector<double> beta(p, 0.0);
  for (int j = p - 1; j >= 0; --j) {
    double rhs = b[j];
    for (int c = j + 1; c < p; ++c) rhs -= a[j][c] * beta[c];
    if (std::fabs(a[j][j]) < 1e-10 * std::fabs(a[0][0]) + 1e-300)
      throw numeric_error("RankDeficientDesign");
    beta[j] = rhs / a[j][j];
  }
  double rss = 0.0;
  for (int i = p; i < n; ++i) rss += b[i] * b[i];
  return {beta, rss / static_cast<double>(n)};
}

std::pair<double, double> mle_ar1(const Dataset& data) {
  if (data.dim() != 1 || data.n() < 3)
    throw invalid_input("mle_ar1 requires univariate data with n >= 3");
  auto y = data.scalars();
  const double n = static_cast<double>(y.size());

  // Exact-likelihood profile over a: sigma2 has the closed form below, so
  // only a 1-D search remains.
  auto profile_sigma2 = [&](double a) {
    double q = (1.0 - a * a) * y[0] * y[0];
    for (std::size_t i = 1; i < y.size(); ++i) {
      double e = y[i] - a * y[i - 1];
      q += e * e;
    }
    return q / n;
  };
  auto profile_loglik = [&](double a) {
    double s2 = profile_sigma2(a);
    if (!(s2 > 0.0)) return -std::numeric_limits<double>::infinity();
    return -0.5 * n * (std::log(2.0 * M_PI * s2) + 1.0) +
           0.5 * std::log1p(-a * a);
  };

  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = -0.999, hi = 0.999;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = profile_loglik(x1), f2 = profile_loglik(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-8; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = profile_loglik(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = profile_loglik(x1);
    }
  }
  if (hi - lo > 1e-6) throw numeric_error("NoConvergence: ar1 MLE search");
  double a = 0.5 * (lo + hi);
  return {a, profile_sigma2(a)};
}

ParamVector fit_mle(const ModelClass& model, const Dataset& data) {
  if (auto* g = dynamic_cast<const GaussianIidModel*>(&model)) {
    if (g->mode() == GaussianIidModel::Mode::Fixed) return model.make_params({});
    auto [mu, s2] = mle_gaussian(data);
    return model.make_params({mu, s2});
  }
  if (dynamic_cast<const PoissonModel*>(&model))
    return model.make_params({mle_poisson(data)});
  if (dynamic_cast<const NegBinomialModel*>(&model)) {
    auto [r, p] = mle_negbin(data);
    return model.make_params({r, p});
  }
  if (auto* pr = dynamic_cast<const PolyRegressionModel*>(&model)) {
    auto [beta, s2] = mle_polyreg(data, pr->covariates(), pr->order());
    beta.push_back(s2);
    return model.make_params(std::move(beta));
  }
  if (dynamic_cast<const LinearAr1Model*>(&model)) {
    auto [a, s2] = mle_ar1(data);
    return model.make_params({a, s2});
  }
  throw invalid_input("no maximum-likelihood fitter for model " + model.name());
}

// ---------------------------------------------------------------------------
// Weight samplers

namespace {

class PointWeightSampler : public WeightSampler {
 public:
  explicit PointWeightSampler(ParamVector theta) : theta_(std::move(theta)) {}
  std::vector<ParamVector> draw(int n, RngKey) override {
    return std::vector<ParamVector>(n, theta_);
  }

 private:
  ParamVector theta_;
};

int effective_thin(const MhSettings& settings) {
  // Auto mode: N draws span at least 10*N post-burn-in steps.
  return settings.thin > 0 ? settings.thin : 10;
}

// Per-coordinate proposal scales: 2.38/sqrt(dim) over the square root of a
// finite-difference curvature estimate at the chain start.
std::vector<double> proposal_scales(const std::function<double(const std::vector<double>&)>& target,
                                    const std::vector<double>& u0,
                                    double multiplier) {
  const int dim = static_cast<int>(u0.size());
  std::vector<double> scales(dim, 0.1);
  const double base = 2.38 / std::sqrt(static_cast<double>(dim));
  double f0 = target(u0);
  for (int i = 0; i < dim; ++i) {
    double h = 1e-3 * (1.0 + std::fabs(u0[i]));
    std::vector<double> up = u0, dn = u0;
    up[i] += h;
    dn[i] -= h;
    double curv = -(target(up) - 2.0 * f0 + target(dn)) / (h * h);
    if (std::isfinite(curv) && curv > 1e-8)
      scales[i] = base / std::sqrt(curv);
    else
      scales[i] = 0.1;
  }
  for (double& s : scales) s *= multiplier;
  return scales;
}

class MhWeightSampler : public WeightSampler {
 public:
  // log_prior: log initial-weight density in the original theta coordinates;
  // nullptr means flat.
  MhWeightSampler(const ModelClass& model, const Dataset& data,
                  MhSettings settings,
                  std::function<double(const std::vector<double>&)> log_prior)
      : model_(model),
        data_(data),
        settings_(settings),
        log_prior_(std::move(log_prior)) {
    ParamVector start;
    try {
      start = fit_mle(model_, data_);
    } catch (const Error& e) {
      // Under- or equidispersed counts push the negative binomial fit to the
      // Poisson boundary (r -> inf); start the chain at a large-r profile
      // point and let it explore from there.
      if (model_.name() == "negbin" &&
          std::string(e.what()).find("Underdispersed") != std::string::npos) {
        double m = 0.0;
        for (double v : data_.scalars()) m += v;
        m = std::max(m / data_.n(), 1e-3);
        const double r0 = 100.0 * m;
        start = model_.make_params({r0, r0 / (r0 + m)});
      } else {
        throw numeric_error(std::string("DegenerateStart: MLE fit failed: ") +
                            e.what());
      }
    }
    u0_ = model_.param_space()->to_unconstrained(start.values());
  }

  std::vector<ParamVector> draw(int n, RngKey key) override {
    const auto space = model_.param_space();
    // Likelihood-proportional target in the original coordinates: the
    // log-Jacobian makes the flat initial weights live on theta, not u.
    auto target = [&](const std::vector<double>& u) {
      auto theta = space->from_unconstrained(u);
      if (!space->contains(theta))
        return -std::numeric_limits<double>::infinity();
      double lp = model_.loglik(model_.make_params(theta), data_) +
                  space->log_jacobian(u);
      if (log_prior_) lp += log_prior_(theta);
      return lp;
    };
    auto scales = proposal_scales(target, u0_, settings_.scale);

    Rng rng = key.engine();
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    const int dim = space->dim();
    const int thin = effective_thin(settings_);
    std::vector<double> u = u0_;
    double lp = target(u);
    std::vector<ParamVector> out;
    out.reserve(n);
    long accepted = 0, steps = 0;
    const long total_steps = static_cast<long>(settings_.burn_in) +
                             static_cast<long>(thin) * n;
    std::vector<double> prop(dim);
    for (long step = 1; step <= total_steps; ++step) {
      for (int i = 0; i < dim; ++i) prop[i] = u[i] + scales[i] * normal(rng);
      double lp_prop = target(prop);
      ++steps;
      if (std::log(unif(rng)) < lp_prop - lp) {
        u = prop;
        lp = lp_prop;
        ++accepted;
      }
      if (step > settings_.burn_in && (step - settings_.burn_in) % thin == 0)
        out.push_back(model_.make_params(space->from_unconstrained(u)));
    }
    acceptance_rate_ = steps > 0 ? static_cast<double>(accepted) / steps : 1.0;
    warning_ = acceptance_rate_ < 0.1 || acceptance_rate_ > 0.6;
    return out;
  }

  double acceptance_rate() const override { return acceptance_rate_; }
  bool acceptance_warning() const override { return warning_; }

 private:
  const ModelClass& model_;
  Dataset data_;
  MhSettings settings_;
  std::function<double(const std::vector<double>&)> log_prior_;
  std::vector<double> u0_;
  double acceptance_rate_ = 0.0;
  bool warning_ = false;
};

}  // namespace

std::unique_ptr<WeightSampler> point_weight_sampler(ParamVector theta) {
  return std::make_unique<PointWeightSampler>(std::move(theta));
}

std::unique_ptr<WeightSampler> mh_weight_sampler(const ModelClass& model,
                                                 const Dataset& data,
                                                 const MhSettings& settings) {
  if (!model.is_exact_likelihood())
    throw invalid_input(
        "mh_weight_sampler requires an exact likelihood; use pmmh for "
        "latent-variable models");
  if (model.param_space()->dim() == 0)
    return point_weight_sampler(model.make_params({}));
  // Flat weights on (r, p) are improper: the likelihood tends to a positive
  // constant at the Poisson boundary r -> inf and the prior mass there is
  // infinite, so the chain escapes. Take the negative binomial weights flat
  // on (ln r, p) instead -- log scale for the dispersion size, natural scale
  // for the bounded probability. The -ln r term cancels the r-coordinate
  // Jacobian of the unconstrained reparameterization.
  std::function<double(const std::vector<double>&)> log_prior;
  if (model.name() == "negbin") {
    log_prior = [](const std::vector<double>& theta) {
      return -std::log(theta[0]);
    };
  }
  return std::make_unique<MhWeightSampler>(model, data, settings,
                                           std::move(log_prior));
}

// ---------------------------------------------------------------------------
// Particle marginal Metropolis-Hastings

namespace {

// Crude moment-based starting point for the kangaroo chain. tau from the
// within-pair overdispersion, sigma from the variability of the smoothed
// log path.
std::pair<double, double> kangaroo_start(const Dataset& data) {
  double tau_acc = 0.0;
  int tau_cnt = 0;
  std::vector<double> lx(data.n());
  for (int i = 0; i < data.n(); ++i) {
    double y1 = data.value(i, 0), y2 = data.value(i, 1);
    double x = std::max(0.5 * (y1 + y2), 0.5);
    lx[i] = std::log(x);
    double var = 0.5 * (y1 - y2) * (y1 - y2);
    if (x > 1.0 && var > x) {
      tau_acc += (var - x) / (x * x);
      ++tau_cnt;
    }
  }
  double tau = tau_cnt > 0 ? tau_acc / tau_cnt : 0.1;
  tau = std::clamp(tau, 0.01, 5.0);
  double s_acc = 0.0;
  int s_cnt = 0;
  for (int i = 1; i < data.n(); ++i) {
    double dt = data.timestamp(i) - data.timestamp(i - 1);
    if (dt > 0) {
      double d = lx[i] - lx[i - 1];
      s_acc += d * d / dt;
      ++s_cnt;
    }
  }
  double sigma = s_cnt > 0 ? std::sqrt(s_acc / s_cnt) : 0.5;
  sigma = std::clamp(sigma, 0.05, 5.0);
  return {sigma, tau};
}

}  // namespace

PmmhWeightSampler::PmmhWeightSampler(const KangarooSsmModel& model,
                                     const Dataset& data, int particles,
                                     const MhSettings& settings)
    : model_(model), data_(data), particles_(particles), settings_(settings) {
  if (particles_ < 1) throw invalid_input("pmmh requires particles >= 1");
  if (data.dim() != 2 || !data.has_timestamps())
    throw invalid_input("pmmh requires bivariate data with timestamps");
}

std::vector<ParamVector> PmmhWeightSampler::draw(int n, RngKey key) {
  auto [sigma0, tau0] = kangaroo_start(data_);
  // The chain walks in (ln sigma, ln tau) but the weights are flat in
  // (sigma, tau), hence the log-Jacobian u[0] + u[1] in the target.
  double ls = std::log(sigma0), lt = std::log(tau0);
  std::vector<double> u = {ls, lt};

  auto pf_loglik = [&](const std::vector<double>& uc, Rng& rng) {
    auto z = kangaroo_particle_filter(std::exp(uc[0]), std::exp(uc[1]), data_,
                                      particles_, rng);
    return std::accumulate(z.begin(), z.end(), 0.0);
  };

  const int thin = settings_.thin > 0 ? settings_.thin : 10;
  const long total_steps =
      static_cast<long>(settings_.burn_in) + static_cast<long>(thin) * n;
  const double step_scale = 0.25 * settings_.scale;

  Rng chain_rng = key.child(0).engine();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  likelihood_evals_ = 0;
  Rng pf_rng = key.child(1).child(0).engine();
  double ll = pf_loglik(u, pf_rng);
  ++likelihood_evals_;

  std::vector<ParamVector> out;
  out.reserve(n);
  long accepted = 0;
  std::vector<double> prop(2);
  for (long step = 1; step <= total_steps; ++step) {
    prop[0] = u[0] + step_scale * normal(chain_rng);
    prop[1] = u[1] + step_scale * normal(chain_rng);
    // Fresh particle-filter estimate for the proposal only; the current
    // state's estimate is retained, as PMMH exactness requires.
    Rng prop_rng = key.child(1).child(step).engine();
    double ll_prop = pf_loglik(prop, prop_rng);
    ++likelihood_evals_;
    if (std::log(unif(chain_rng)) <
        (ll_prop + prop[0] + prop[1]) - (ll + u[0] + u[1])) {
      u = prop;
      ll = ll_prop;
      ++accepted;
    }
    if (step > settings_.burn_in && (step - settings_.burn_in) % thin == 0)
      out.push_back(model_.make_params({std::exp(u[0]), std::exp(u[1])}));
  }
  acceptance_rate_ =
      total_steps > 0 ? static_cast<double>(accepted) / total_steps : 1.0;
  warning_ = acceptance_rate_ < 0.1 || acceptance_rate_ > 0.6;
  return out;
}

std::unique_ptr<WeightSampler> pmmh_weight_sampler(
    const KangarooSsmModel& model, const Dataset& data, int particles,
    const MhSettings& settings) {
  return std::make_unique<PmmhWeightSampler>(model, data, particles, settings);
}

std::unique_ptr<WeightSampler> make_weight_sampler(const ModelClass& model,
                                                   const Dataset& data,
                                                   const DccConfig& config) {
  switch (config.weight_mode) {
    case WeightMode::PointMle:
      return point_weight_sampler(fit_mle(model, data));
    case WeightMode::Mh:
      return mh_weight_sampler(model, data, config.mh);
    case WeightMode::Pmmh: {
      auto* ssm = dynamic_cast<const KangarooSsmModel*>(&model);
      if (!ssm) throw invalid_input("pmmh weights require the kangaroo model");
      return pmmh_weight_sampler(*ssm, data, config.particles, config.mh);
    }
  }
  throw invalid_input("unknown weight mode");
}

}  // namespace dcc
