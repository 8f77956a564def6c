#include "dcc/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "dcc/errors.hpp"
#include "dcc/parallel.hpp"
#include "dcc/rng.hpp"

namespace dcc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::pair<double, double> sample_mean_mle_var(const std::vector<double>& y) {
  double mu = 0.0;
  for (double v : y) mu += v;
  mu /= static_cast<double>(y.size());
  double ss = 0.0;
  for (double v : y) ss += (v - mu) * (v - mu);
  double s2 = ss / static_cast<double>(y.size());
  if (s2 <= 0.0) throw numeric_error("ZeroVariance");
  return {mu, s2};
}

double ks_distance_vs_cdf(const std::vector<double>& sorted,
                          const std::function<double(double)>& cdf) {
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    double u = cdf(sorted[i]);
    d = std::max(d, std::fabs((i + 1) / n - u));
    d = std::max(d, std::fabs(u - i / n));
  }
  return d;
}

std::vector<double> require_scalar_series(const Dataset& data, int min_n,
                                          const char* who) {
  if (data.dim() != 1)
    throw invalid_input(std::string(who) + " requires univariate data");
  if (data.n() < min_n)
    throw invalid_input(std::string(who) + " requires n >= " +
                        std::to_string(min_n));
  return data.scalars();
}

}  // namespace

double ks_fixed_statistic(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return ks_distance_vs_cdf(values, [](double x) { return std_normal_cdf(x); });
}

double lilliefors_statistic(std::vector<double> values) {
  auto [mu, s2] = sample_mean_mle_var(values);
  double sd = std::sqrt(s2);
  std::sort(values.begin(), values.end());
  return ks_distance_vs_cdf(
      values, [&](double x) { return std_normal_cdf((x - mu) / sd); });
}

double anderson_darling_statistic(std::vector<double> values) {
  auto [mu, s2] = sample_mean_mle_var(values);
  double sd = std::sqrt(s2);
  std::sort(values.begin(), values.end());
  const int n = static_cast<int>(values.size());
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double ui = std_normal_cdf((values[i] - mu) / sd);
    double un1i = std_normal_cdf((values[n - 1 - i] - mu) / sd);
    ui = std::clamp(ui, 1e-300, 1.0 - 1e-16);
    un1i = std::clamp(un1i, 1e-300, 1.0 - 1e-16);
    acc += (2.0 * i + 1.0) * (std::log(ui) + std::log1p(-un1i));
  }
  return -n - acc / static_cast<double>(n);
}

double jarque_bera_statistic(const std::vector<double>& values) {
  auto [mu, s2] = sample_mean_mle_var(values);
  const double n = static_cast<double>(values.size());
  double m3 = 0.0, m4 = 0.0;
  for (double v : values) {
    double d = v - mu;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m3 /= n;
  m4 /= n;
  double skew = m3 / std::pow(s2, 1.5);
  double kurt = m4 / (s2 * s2);
  return n / 6.0 * (skew * skew + 0.25 * (kurt - 3.0) * (kurt - 3.0));
}

int ljung_box_default_lags(int n) {
  return static_cast<int>(std::lround(std::log(static_cast<double>(n))));
}

double ljung_box_statistic(const std::vector<double>& residuals, int h) {
  const int n = static_cast<int>(residuals.size());
  if (h < 1) throw invalid_input("ljung_box requires h >= 1");
  if (n <= h) throw invalid_input("ljung_box requires n > h");
  double mean = 0.0;
  for (double v : residuals) mean += v;
  mean /= n;
  double c0 = 0.0;
  for (double v : residuals) c0 += (v - mean) * (v - mean);
  c0 /= n;  // biased (1/n) normalization
  if (c0 <= 0.0) throw numeric_error("ZeroVariance");
  double q = 0.0;
  for (int k = 1; k <= h; ++k) {
    double ck = 0.0;
    for (int i = k; i < n; ++i)
      ck += (residuals[i] - mean) * (residuals[i - k] - mean);
    ck /= n;
    double rk = ck / c0;
    q += rk * rk / static_cast<double>(n - k);
  }
  return static_cast<double>(n) * (n + 2.0) * q;
}

// ---------------------------------------------------------------------------
// Calibration cache

CalibrationCache::CalibrationCache(std::string csv_path)
    : csv_path_(std::move(csv_path)) {
  load();
}

void CalibrationCache::load() {
  if (csv_path_.empty()) return;
  std::ifstream in(csv_path_);
  if (!in) return;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string test, field;
    int n = 0, reps = 0;
    double level = 0.0, threshold = 0.0;
    std::uint64_t seed = 0;
    if (!std::getline(ss, test, ',')) continue;
    if (!std::getline(ss, field, ',')) continue;
    n = std::stoi(field);
    if (!std::getline(ss, field, ',')) continue;
    level = std::stod(field);
    if (!std::getline(ss, field, ',')) continue;
    reps = std::stoi(field);
    if (!std::getline(ss, field, ',')) continue;
    seed = std::stoull(field);
    if (!std::getline(ss, field, ',')) continue;
    threshold = std::stod(field);
    entries_[{test, n, level, reps, seed}] = threshold;
  }
}

void CalibrationCache::append(const Key& key, double value) {
  if (csv_path_.empty()) return;
  bool fresh = !std::ifstream(csv_path_).good();
  std::ofstream out(csv_path_, std::ios::app);
  if (!out) return;
  if (fresh) out << "test,n,level,reps,seed,threshold\n";
  out << std::get<0>(key) << ',' << std::get<1>(key) << ','
      << std::get<2>(key) << ',' << std::get<3>(key) << ','
      << std::get<4>(key) << ',';
  out.precision(17);
  out << value << '\n';
}

double CalibrationCache::compute(const std::string& test, int n, double level,
                                 int reps, std::uint64_t seed) const {
  std::vector<double> stats(reps, 0.0);
  RngKey key = RngKey::root(seed ^ detail::splitmix64(n));
  parallel_for(reps, 0, [&](int r) {
    Rng rng = key.child(r).engine();
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> y(n);
    for (auto& v : y) v = normal(rng);
    if (test == "ks") {
      stats[r] = ks_fixed_statistic(std::move(y));
    } else if (test == "lilliefors") {
      stats[r] = lilliefors_statistic(std::move(y));
    } else if (test == "ad") {
      stats[r] = anderson_darling_statistic(std::move(y));
    } else if (test == "jb") {
      stats[r] = jarque_bera_statistic(y);
    } else {
      throw invalid_input("unknown calibrated test: " + test);
    }
  });
  std::sort(stats.begin(), stats.end());
  // Upper (1-level)-quantile of the null statistic; reject if above.
  int k = static_cast<int>(std::ceil((1.0 - level) * reps));
  k = std::clamp(k, 1, reps);
  return stats[k - 1];
}

double CalibrationCache::threshold(const std::string& test, int n, double level,
                                   int reps, std::uint64_t seed) {
  Key key{test, n, level, reps, seed};
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = entries_.find(key);
    if (it != entries_.end()) return it->second;
  }
  double value = compute(test, n, level, reps, seed);
  std::lock_guard<std::mutex> lock(mutex_);
  auto [it, inserted] = entries_.emplace(key, value);
  if (inserted) append(key, value);
  return it->second;
}

// ---------------------------------------------------------------------------
// Test reports

namespace {

TestReport calibrated_report(const std::string& test, double stat,
                             const Dataset& data,
                             const BaselineSettings& settings,
                             CalibrationCache& cache) {
  TestReport rep;
  rep.test = test;
  rep.statistic = stat;
  rep.p_value = kNaN;
  rep.level = settings.level;
  rep.threshold = cache.threshold(test, data.n(), settings.level,
                                  settings.calibration_reps,
                                  settings.calibration_seed);
  rep.reject = stat > rep.threshold;
  rep.calibration = "simulated: reps=" +
                    std::to_string(settings.calibration_reps) +
                    ", seed=" + std::to_string(settings.calibration_seed);
  return rep;
}

}  // namespace

TestReport ks_fixed(const Dataset& data, const BaselineSettings& settings,
                    CalibrationCache& cache) {
  auto y = require_scalar_series(data, 5, "ks_fixed");
  return calibrated_report("ks", ks_fixed_statistic(std::move(y)), data,
                           settings, cache);
}

TestReport lilliefors(const Dataset& data, const BaselineSettings& settings,
                      CalibrationCache& cache) {
  auto y = require_scalar_series(data, 8, "lilliefors");
  return calibrated_report("lilliefors", lilliefors_statistic(std::move(y)),
                           data, settings, cache);
}

TestReport anderson_darling(const Dataset& data,
                            const BaselineSettings& settings,
                            CalibrationCache& cache) {
  auto y = require_scalar_series(data, 8, "anderson_darling");
  return calibrated_report("ad", anderson_darling_statistic(std::move(y)),
                           data, settings, cache);
}

TestReport jarque_bera(const Dataset& data, const BaselineSettings& settings,
                       CalibrationCache& cache) {
  auto y = require_scalar_series(data, 8, "jarque_bera");
  return calibrated_report("jb", jarque_bera_statistic(y), data, settings,
                           cache);
}

TestReport ljung_box(const std::vector<double>& residuals, int h, int d_param,
                     double level) {
  if (h - d_param < 1)
    throw invalid_input(
        "NonPositiveDof: Ljung-Box needs h - d_param >= 1 (h=" +
        std::to_string(h) + ", d=" + std::to_string(d_param) + ")");
  TestReport rep;
  rep.test = "ljungbox";
  rep.statistic = ljung_box_statistic(residuals, h);
  rep.p_value = chi2_sf(rep.statistic, h - d_param);
  rep.level = level;
  rep.threshold = level;  // rejection on the p-value scale
  rep.reject = rep.p_value < level;
  rep.calibration = "analytic";
  return rep;
}

}  // namespace dcc
