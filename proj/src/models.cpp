#include "dcc/models.hpp"

#include <cmath>

#include "dcc/distributions.hpp"
#include "dcc/errors.hpp"

namespace dcc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_scalar(const Dataset& data, const char* who) {
  if (data.dim() != 1)
    throw invalid_input(std::string(who) + " requires univariate data");
}

Dataset like_template(std::vector<double> values, const Dataset& tmpl) {
  std::optional<std::vector<double>> ts;
  if (tmpl.has_timestamps()) ts = tmpl.timestamps();
  return Dataset::from_flat(std::move(values), tmpl.n(), 1, std::move(ts));
}

}  // namespace

// ---------------------------------------------------------------------------
// Gaussian iid

GaussianIidModel::GaussianIidModel(Mode mode) : mode_(mode) {
  if (mode_ == Mode::Fixed) {
    space_ = std::make_shared<const ParamSpace>();
  } else {
    space_ = std::make_shared<const ParamSpace>(std::vector<ParamSpace::Coord>{
        {"mu", -kInf, kInf}, {"sigma2", 0.0, kInf}});
  }
}

std::string GaussianIidModel::name() const {
  return mode_ == Mode::Fixed ? "gaussian-fixed" : "gaussian";
}

Dataset GaussianIidModel::simulate(const ParamVector& theta,
                                   const Dataset& template_data,
                                   Rng& rng) const {
  require_scalar(template_data, "gaussian model");
  double mu = 0.0, sd = 1.0;
  if (mode_ == Mode::Free) {
    mu = theta[0];
    sd = std::sqrt(theta[1]);
  }
  std::vector<double> y(template_data.n());
  std::normal_distribution<double> dist(mu, sd);
  for (auto& v : y) v = dist(rng);
  return like_template(std::move(y), template_data);
}

std::vector<double> GaussianIidModel::incremental_logliks(
    const ParamVector& theta, const Dataset& data, Rng*) const {
  require_scalar(data, "gaussian model");
  double mu = 0.0, s2 = 1.0;
  if (mode_ == Mode::Free) {
    mu = theta[0];
    s2 = theta[1];
  }
  std::vector<double> z(data.n());
  for (int i = 0; i < data.n(); ++i)
    z[i] = gaussian_logpdf(data.scalar(i), mu, s2);
  return z;
}

// ---------------------------------------------------------------------------
// Poisson

PoissonModel::PoissonModel()
    : space_(std::make_shared<const ParamSpace>(
          std::vector<ParamSpace::Coord>{{"lambda", 0.0, kInf}})) {}

Dataset PoissonModel::simulate(const ParamVector& theta,
                               const Dataset& template_data, Rng& rng) const {
  require_scalar(template_data, "poisson model");
  std::vector<double> y(template_data.n());
  for (auto& v : y) v = static_cast<double>(sample_poisson(rng, theta[0]));
  return like_template(std::move(y), template_data);
}

std::vector<double> PoissonModel::incremental_logliks(const ParamVector& theta,
                                                      const Dataset& data,
                                                      Rng*) const {
  require_scalar(data, "poisson model");
  std::vector<double> z(data.n());
  for (int i = 0; i < data.n(); ++i)
    z[i] = poisson_logpmf(data.scalar(i), theta[0]);
  return z;
}

// ---------------------------------------------------------------------------
// Negative binomial

NegBinomialModel::NegBinomialModel()
    : space_(std::make_shared<const ParamSpace>(std::vector<ParamSpace::Coord>{
          {"r", 0.0, kInf}, {"p", 0.0, 1.0}})) {}

Dataset NegBinomialModel::simulate(const ParamVector& theta,
                                   const Dataset& template_data,
                                   Rng& rng) const {
  require_scalar(template_data, "negbin model");
  std::vector<double> y(template_data.n());
  for (auto& v : y)
    v = static_cast<double>(sample_negbin(rng, theta[0], theta[1]));
  return like_template(std::move(y), template_data);
}

std::vector<double> NegBinomialModel::incremental_logliks(
    const ParamVector& theta, const Dataset& data, Rng*) const {
  require_scalar(data, "negbin model");
  std::vector<double> z(data.n());
  for (int i = 0; i < data.n(); ++i)
    z[i] = negbin_logpmf(data.scalar(i), theta[0], theta[1]);
  return z;
}

// ---------------------------------------------------------------------------
// Polynomial regression

PolyRegressionModel::PolyRegressionModel(int order,
                                         std::vector<double> covariates)
    : order_(order), covariates_(std::move(covariates)) {
  if (order_ < 0) throw invalid_input("polynomial order must be >= 0");
  if (covariates_.empty()) throw invalid_input("empty covariate grid");
  std::vector<ParamSpace::Coord> coords;
  for (int j = 0; j <= order_; ++j)
    coords.push_back({"beta" + std::to_string(j), -kInf, kInf});
  coords.push_back({"sigma2", 0.0, kInf});
  space_ = std::make_shared<const ParamSpace>(std::move(coords));
}

std::vector<double> PolyRegressionModel::default_grid(int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i)
    x[i] = -25.0 + 50.0 * i / static_cast<double>(n - 1);
  return x;
}

std::string PolyRegressionModel::name() const {
  return "polyreg:k=" + std::to_string(order_);
}

double PolyRegressionModel::predict(const ParamVector& theta, double x) const {
  double acc = 0.0;
  for (int j = order_; j >= 0; --j) acc = acc * x + theta[j];
  return acc;
}

Dataset PolyRegressionModel::simulate(const ParamVector& theta,
                                      const Dataset& template_data,
                                      Rng& rng) const {
  require_scalar(template_data, "regression model");
  if (template_data.n() != static_cast<int>(covariates_.size()))
    throw invalid_input("covariate grid length must equal template n");
  double sd = std::sqrt(theta[order_ + 1]);
  std::vector<double> y(template_data.n());
  std::normal_distribution<double> noise(0.0, sd);
  for (int i = 0; i < template_data.n(); ++i)
    y[i] = predict(theta, covariates_[i]) + noise(rng);
  return like_template(std::move(y), template_data);
}

std::vector<double> PolyRegressionModel::incremental_logliks(
    const ParamVector& theta, const Dataset& data, Rng*) const {
  require_scalar(data, "regression model");
  if (data.n() != static_cast<int>(covariates_.size()))
    throw invalid_input("covariate grid length must equal data n");
  double s2 = theta[order_ + 1];
  std::vector<double> z(data.n());
  for (int i = 0; i < data.n(); ++i)
    z[i] = gaussian_logpdf(data.scalar(i), predict(theta, covariates_[i]), s2);
  return z;
}

// ---------------------------------------------------------------------------
// Linear AR(1)

LinearAr1Model::LinearAr1Model()
    : space_(std::make_shared<const ParamSpace>(std::vector<ParamSpace::Coord>{
          {"a", -1.0, 1.0}, {"sigma2", 0.0, kInf}})) {}

std::vector<double> ar1_incremental_logliks(double a, double sigma2,
                                            const Dataset& data) {
  if (!(std::fabs(a) < 1.0))
    throw invalid_input("NonStationaryCoefficient: requires |a| < 1");
  if (!(sigma2 > 0.0)) throw invalid_input("NonPositiveVariance");
  std::vector<double> z(data.n());
  // Stationary initial law keeps the joint density proper.
  z[0] = gaussian_logpdf(data.scalar(0), 0.0, sigma2 / (1.0 - a * a));
  for (int i = 1; i < data.n(); ++i)
    z[i] = gaussian_logpdf(data.scalar(i), a * data.scalar(i - 1), sigma2);
  return z;
}

Dataset LinearAr1Model::simulate(const ParamVector& theta,
                                 const Dataset& template_data, Rng& rng) const {
  require_scalar(template_data, "ar1 model");
  double a = theta[0], sd = std::sqrt(theta[1]);
  std::vector<double> y(template_data.n());
  std::normal_distribution<double> noise(0.0, 1.0);
  y[0] = noise(rng) * sd / std::sqrt(1.0 - a * a);
  for (int i = 1; i < template_data.n(); ++i)
    y[i] = a * y[i - 1] + sd * noise(rng);
  return like_template(std::move(y), template_data);
}

std::vector<double> LinearAr1Model::incremental_logliks(
    const ParamVector& theta, const Dataset& data, Rng*) const {
  require_scalar(data, "ar1 model");
  return ar1_incremental_logliks(theta[0], theta[1], data);
}

// ---------------------------------------------------------------------------
// Saturated AR(1) generator

std::vector<double> simulate_saturated_ar1(int n, Rng& rng) {
  if (n < 1) throw invalid_input("saturated AR(1) requires n >= 1");
  std::vector<double> y(n);
  std::normal_distribution<double> noise(0.0, 1.0);
  double prev = 0.0;
  for (int i = 0; i < n; ++i) {
    prev = std::max(0.7 * prev + noise(rng), -0.3);
    y[i] = prev;
  }
  return y;
}

// ---------------------------------------------------------------------------
// Model specification strings

std::unique_ptr<ModelClass> make_model(const std::string& spec, int n_hint) {
  if (spec == "gaussian-fixed")
    return std::make_unique<GaussianIidModel>(GaussianIidModel::Mode::Fixed);
  if (spec == "gaussian")
    return std::make_unique<GaussianIidModel>(GaussianIidModel::Mode::Free);
  if (spec == "poisson") return std::make_unique<PoissonModel>();
  if (spec == "negbin") return std::make_unique<NegBinomialModel>();
  if (spec == "ar1") return std::make_unique<LinearAr1Model>();
  if (spec.rfind("polyreg:k=", 0) == 0) {
    int k = std::stoi(spec.substr(10));
    return std::make_unique<PolyRegressionModel>(
        k, PolyRegressionModel::default_grid(n_hint));
  }
  if (spec == "kangaroo-ssm") return std::make_unique<KangarooSsmModel>();
  if (spec.rfind("kangaroo-ssm:K=", 0) == 0) {
    int k = std::stoi(spec.substr(15));
    return std::make_unique<KangarooSsmModel>(k);
  }
  throw invalid_input("unknown model specification: " + spec);
}

}  // namespace dcc
