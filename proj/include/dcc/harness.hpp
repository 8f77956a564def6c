#ifndef DCC_HARNESS_HPP
#define DCC_HARNESS_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dcc/dataset.hpp"
#include "dcc/model.hpp"

namespace dcc {

// Embedded datasets from the published tables: four 38-point yearly
// earthquake count series (1980-2017) and the 41-point bivariate kangaroo
// series with fractional-year timestamps.
// Names: earthquake-m8, earthquake-m7, earthquake-m6, earthquake-m5,
// kangaroo.
Dataset embedded_dataset(const std::string& name);
std::vector<std::string> embedded_dataset_names();

struct Histogram {
  std::vector<double> edges;   // bins + 1 edges
  std::vector<long> counts;    // left-closed right-open, last bin closed
};

Histogram histogram(const std::vector<double>& values, int bins, double lo,
                    double hi);

struct ExperimentSpec {
  std::string name;  // earthquake | gaussian | regression | ar | kangaroo
  int replications = 0;  // 0 = experiment default
  DccConfig config;      // seed/threads honored; counts default per experiment
  bool smoke = false;    // reduced sizes for desk-scale runs
  std::vector<int> sizes;  // ar experiment: data sizes (default 10/100/1000)
  bool calibrate = true;   // ar experiment: also report calibrated rates
};

// Runs a named experiment and returns its machine-readable report:
// {"config": ..., "results": [...], "baselines": [...], "histograms": [...]}.
// Re-running with the same seed reproduces identical numeric payloads.
nlohmann::json run_experiment(const ExperimentSpec& spec);

// Ad-hoc criterion evaluation used by the CLI `run` subcommand.
nlohmann::json run_dcc_report(const std::string& model_spec,
                              const Dataset& data, const DccConfig& config);

// Entry point behind the `dcc` binary; exposed for tests.
// Exit codes: 0 success, 1 usage error, 2 numeric failure.
int cli_main(int argc, const char* const* argv);

}  // namespace dcc

#endif  // DCC_HARNESS_HPP
