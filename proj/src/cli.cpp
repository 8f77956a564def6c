#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dcc/baselines.hpp"
#include "dcc/engine.hpp"
#include "dcc/errors.hpp"
#include "dcc/harness.hpp"
#include "dcc/inference.hpp"
#include "dcc/models.hpp"

namespace dcc {

namespace {

using nlohmann::json;

void emit(const json& report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw invalid_input("cannot open output file: " + out_path);
    f << report.dump(2) << "\n";
  }
}

WeightMode parse_weights(const std::string& w) {
  if (w == "mle" || w == "point-mle") return WeightMode::PointMle;
  if (w == "mh") return WeightMode::Mh;
  if (w == "pmmh") return WeightMode::Pmmh;
  throw invalid_input("unknown weight mode: " + w +
                      " (expected mle|mh|pmmh)");
}

// Loads a dataset either from an embedded name or a CSV path.
Dataset load_data(const std::string& arg) {
  for (const auto& name : embedded_dataset_names())
    if (arg == name) return embedded_dataset(name);
  return read_csv_file(arg);
}

struct CommonDccOpts {
  std::string weights = "mle";
  DccConfig cfg;

  void attach(CLI::App* cmd) {
    cmd->add_option("--n-theta", cfg.n_theta, "parameter draws N");
    cmd->add_option("--m-test", cfg.m_test, "test replicates M");
    cmd->add_option("--m-cal", cfg.m_cal, "moment-calibration replicates M'");
    cmd->add_option("--weights", weights, "weight sampler: mle|mh|pmmh");
    cmd->add_option("--seed", cfg.seed, "RNG seed");
    cmd->add_option("--mh-burnin", cfg.mh.burn_in, "MH burn-in steps");
    cmd->add_option("--mh-thin", cfg.mh.thin, "MH thinning (0 = auto)");
    cmd->add_option("--mh-scale", cfg.mh.scale, "MH proposal scale multiplier");
    cmd->add_option("--pf-particles", cfg.particles, "particle filter size K");
    cmd->add_flag("--pool-iid", cfg.pool_iid_moments,
                  "pool moments across indices (iid classes only)");
    cmd->add_option("--threads", cfg.threads, "worker threads (0 = auto)");
  }

  DccConfig config() const {
    DccConfig c = cfg;
    c.weight_mode = parse_weights(weights);
    return c;
  }
};

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Data consistency criterion: averaged false-alarm probability "
               "for statistical model classes, plus classical baselines"};
  app.require_subcommand(1);

  // --- run -----------------------------------------------------------------
  auto* run = app.add_subcommand("run", "evaluate the criterion on a dataset");
  std::string run_model, run_data, run_out;
  CommonDccOpts run_opts;
  run->add_option("--model", run_model, "model class spec")->required();
  run->add_option("--data", run_data, "CSV path or embedded dataset name")
      ->required();
  run->add_option("--out", run_out, "output JSON path (default stdout)");
  run_opts.attach(run);

  // --- experiment ----------------------------------------------------------
  auto* exp = app.add_subcommand("experiment", "run a named study");
  std::string exp_name, exp_out;
  ExperimentSpec spec;
  bool no_calibrate = false;
  exp->add_option("name", exp_name,
                  "earthquake|gaussian|regression|ar|kangaroo")
      ->required();
  exp->add_option("--seed", spec.config.seed, "RNG seed");
  exp->add_option("--replications", spec.replications,
                  "replication count (0 = study default)");
  exp->add_flag("--smoke", spec.smoke, "reduced desk-scale sizes");
  exp->add_option("--sizes", spec.sizes, "data sizes (ar study)");
  exp->add_flag("--no-calibrate", no_calibrate,
                "skip threshold calibration (ar study)");
  exp->add_option("--pf-particles", spec.config.particles,
                  "particle filter size K (kangaroo study)");
  exp->add_option("--threads", spec.config.threads, "worker threads");
  exp->add_option("--out", exp_out, "output JSON path (default stdout)");

  // --- calibrate -----------------------------------------------------------
  auto* cal = app.add_subcommand(
      "calibrate", "simulate a rejection threshold from within a model class");
  std::string cal_model, cal_out;
  std::vector<double> cal_theta;
  int cal_n = 100, cal_reps = 200;
  double cal_rho = 0.05;
  CommonDccOpts cal_opts;
  cal->add_option("--model", cal_model, "model class spec")->required();
  cal->add_option("--n", cal_n, "dataset size")->required();
  cal->add_option("--rho", cal_rho, "target false-rejection rate");
  cal->add_option("--reps", cal_reps, "null replications (>= 100)");
  cal->add_option("--theta", cal_theta, "generator parameters");
  cal->add_option("--out", cal_out, "output JSON path (default stdout)");
  cal_opts.attach(cal);

  // --- baseline ------------------------------------------------------------
  auto* bl = app.add_subcommand("baseline", "run a classical test");
  std::string bl_test, bl_data, bl_cache, bl_out;
  double bl_level = 0.10;
  int bl_reps = 100000, bl_lags = 0, bl_dparam = 0;
  std::uint64_t bl_seed = 977;
  bl->add_option("--test", bl_test, "ks|lilliefors|ad|jb|ljungbox")
      ->required();
  bl->add_option("--data", bl_data, "CSV path or embedded dataset name")
      ->required();
  bl->add_option("--level", bl_level, "nominal level");
  bl->add_option("--reps", bl_reps, "calibration replications");
  bl->add_option("--cache", bl_cache, "calibration cache CSV path");
  bl->add_option("--lags", bl_lags, "Ljung-Box lag count (0 = ln n default)");
  bl->add_option("--d-param", bl_dparam, "Ljung-Box fitted-parameter count");
  bl->add_option("--seed", bl_seed, "calibration seed");
  bl->add_option("--out", bl_out, "output JSON path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (run->parsed()) {
      Dataset data = load_data(run_data);
      emit(run_dcc_report(run_model, data, run_opts.config()), run_out);
    } else if (exp->parsed()) {
      spec.name = exp_name;
      spec.calibrate = !no_calibrate;
      emit(run_experiment(spec), exp_out);
    } else if (cal->parsed()) {
      DccConfig cfg = cal_opts.config();
      cfg.validate();
      auto model = make_model(cal_model, cal_n);
      ParamVector theta = model->make_params(cal_theta);
      WeightSamplerFactory factory = [&](const Dataset& d, RngKey) {
        return make_weight_sampler(*model, d, cfg);
      };
      std::vector<double> nulls;
      double thr =
          calibrate_threshold(*model, theta, cal_n, cal_rho, cal_reps, factory,
                              cfg, RngKey::root(cfg.seed), &nulls);
      json report{{"config", json{{"model", cal_model},
                                  {"n", cal_n},
                                  {"rho", cal_rho},
                                  {"reps", cal_reps},
                                  {"seed", cfg.seed}}},
                  {"threshold", thr},
                  {"null_pfa_star", nulls}};
      emit(report, cal_out);
    } else if (bl->parsed()) {
      Dataset data = load_data(bl_data);
      BaselineSettings settings;
      settings.level = bl_level;
      settings.calibration_reps = bl_reps;
      settings.calibration_seed = bl_seed;
      CalibrationCache cache =
          bl_cache.empty() ? CalibrationCache() : CalibrationCache(bl_cache);
      TestReport rep;
      if (bl_test == "ks") {
        rep = ks_fixed(data, settings, cache);
      } else if (bl_test == "lilliefors") {
        rep = lilliefors(data, settings, cache);
      } else if (bl_test == "ad") {
        rep = anderson_darling(data, settings, cache);
      } else if (bl_test == "jb") {
        rep = jarque_bera(data, settings, cache);
      } else if (bl_test == "ljungbox") {
        int h = bl_lags > 0 ? bl_lags : ljung_box_default_lags(data.n());
        rep = ljung_box(data.scalars(), h, bl_dparam, bl_level);
      } else {
        throw invalid_input("unknown test: " + bl_test);
      }
      json entry{{"test", rep.test},
                 {"statistic", rep.statistic},
                 {"threshold", rep.threshold},
                 {"level", rep.level},
                 {"reject", rep.reject},
                 {"calibration", rep.calibration}};
      if (std::isnan(rep.p_value))
        entry["p_value"] = nullptr;
      else
        entry["p_value"] = rep.p_value;
      emit(json{{"baselines", json::array({entry})}}, bl_out);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::Numeric ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace dcc
