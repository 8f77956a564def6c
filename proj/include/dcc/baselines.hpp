#ifndef DCC_BASELINES_HPP
#define DCC_BASELINES_HPP

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "dcc/dataset.hpp"
#include "dcc/special.hpp"

namespace dcc {

struct TestReport {
  std::string test;
  double statistic = 0.0;
  // Analytic p-value where available (Ljung-Box); NaN otherwise.
  double p_value = 0.0;
  double threshold = 0.0;
  double level = 0.0;
  bool reject = false;
  // "analytic" or "simulated: reps=<r>, seed=<s>".
  std::string calibration;
};

// Rejection thresholds by Monte Carlo calibration under N(0,1) nulls,
// cached by (test, n, level, reps, seed). Cache writes are serialized; an
// optional CSV file persists entries across runs.
class CalibrationCache {
 public:
  CalibrationCache() = default;
  explicit CalibrationCache(std::string csv_path);

  double threshold(const std::string& test, int n, double level, int reps,
                   std::uint64_t seed);

 private:
  using Key = std::tuple<std::string, int, double, int, std::uint64_t>;
  double compute(const std::string& test, int n, double level, int reps,
                 std::uint64_t seed) const;
  void load();
  void append(const Key& key, double value);

  std::string csv_path_;
  std::map<Key, double> entries_;
  std::mutex mutex_;
};

// Raw statistics.
double ks_fixed_statistic(std::vector<double> values);        // vs N(0,1)
double lilliefors_statistic(std::vector<double> values);      // vs N(mu^, s2^)
double anderson_darling_statistic(std::vector<double> values);
double jarque_bera_statistic(const std::vector<double>& values);
double ljung_box_statistic(const std::vector<double>& residuals, int h);

// Default Ljung-Box lag count: ln(n) rounded to nearest integer.
int ljung_box_default_lags(int n);

struct BaselineSettings {
  double level = 0.10;
  int calibration_reps = 100000;
  std::uint64_t calibration_seed = 977;
};

TestReport ks_fixed(const Dataset& data, const BaselineSettings& settings,
                    CalibrationCache& cache);
TestReport lilliefors(const Dataset& data, const BaselineSettings& settings,
                      CalibrationCache& cache);
TestReport anderson_darling(const Dataset& data,
                            const BaselineSettings& settings,
                            CalibrationCache& cache);
TestReport jarque_bera(const Dataset& data, const BaselineSettings& settings,
                       CalibrationCache& cache);

// Q = n(n+2) sum_{k=1..h} r_k^2/(n-k), p-value from chi2 with h - d_param
// degrees of freedom. Throws if h - d_param < 1.
TestReport ljung_box(const std::vector<double>& residuals, int h, int d_param,
                     double level);

}  // namespace dcc

#endif  // DCC_BASELINES_HPP
