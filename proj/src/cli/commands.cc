//
// Copyright 2026 The Privacy HCR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "privacy_hcr/cli/commands.h"

#include <cmath>
#include <exception>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "privacy_hcr/errors.h"

namespace privacy_hcr::cli {
namespace {

void Field(std::ostream& os, const std::string& key, const std::string& value,
           const std::string& unit = "") {
  os << key << ": " << value;
  if (!unit.empty()) os << ' ' << unit;
  os << '\n';
}

void Field(std::ostream& os, const std::string& key, double value,
           const std::string& unit = "") {
  Field(os, key, FormatNumber(value), unit);
}

std::ofstream OpenCsv(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  return out;
}

void CloseCsv(std::ofstream& out, const std::string& path) {
  out.close();
  if (!out) throw ConfigError("error while writing '" + path + "'");
}

struct SweepRow {
  double value;
  int k_star;
  int horizon;
  double bound_steps2;
  double bound_min2;
  std::optional<TrialSummary> trials;
  double dt;
};

}  // namespace

BoundReport CmdBound(const CommandOptions& options, std::ostream& report) {
  const ScenarioConfig config = ResolveConfig(options);
  const StepScenario& sc = config.scenario;
  const BoundReport bound = HcrBound(config.system, sc.k_star, sc.horizon);

  report << "# privacy-hcr bound\n";
  Field(report, "model", config.model.path);
  Field(report, "k_star", std::to_string(sc.k_star), "steps");
  Field(report, "horizon", std::to_string(sc.horizon), "steps");
  Field(report, "sigma2", config.system.sigma2());
  Field(report, "dt", config.system.dt(), "min");
  Field(report, "tau_star", std::to_string(bound.tau_star), "steps");
  Field(report, "S(tau_star)", bound.tau_star > 0 ? bound.s_at_tau_star() : 0.0);
  Field(report, "bound", bound.bound_steps2, "steps^2");
  Field(report, "bound_phys", bound.bound_phys, "min^2");
  Field(report, "overflow_mode", bound.overflow_mode ? "true" : "false");
  if (bound.perfect_privacy()) {
    Field(report, "note",
          "some shift leaves the output distribution unchanged; no estimator "
          "can localize the change within this horizon");
  }

  if (!options.out_path.empty()) {
    std::ofstream csv = OpenCsv(options.out_path);
    csv << "# config: " << DescribeConfig(config, "bound") << '\n';
    csv << "tau,S,quotient_steps2\n";
    for (const SPoint& p : bound.s_profile) {
      const double root = static_cast<double>(p.tau);
      const double q = p.s == 0.0
                           ? std::numeric_limits<double>::infinity()
                           : HcrQuotient(root, p.s, QuotientMethod::kAuto);
      csv << p.tau << ',' << FormatNumber(p.s) << ',' << FormatNumber(q) << '\n';
    }
    CloseCsv(csv, options.out_path);
  }
  return bound;
}

EstimationResult CmdEstimate(const CommandOptions& options,
                             std::ostream& report) {
  if (options.data_path.empty()) {
    throw ConfigError("estimate needs a measurement CSV (--data <path>)");
  }
  ScenarioConfig config = ResolveConfig(options, /*require_horizon=*/false);
  const MeasurementSeries y = ReadMeasurementCsv(options.data_path);
  if (config.horizon_given && y.horizon() != config.scenario.horizon) {
    throw ConfigError(options.data_path + ": expected " +
                      std::to_string(config.scenario.horizon + 1) +
                      " data rows (k = 0..N), got " +
                      std::to_string(y.values.size()));
  }
  config.scenario.horizon = y.horizon();
  const EstimationResult result =
      EstimateChange(y, config.system,
                     config.scenario.InitialState(config.system.n()),
                     config.estimator);

  report << "# privacy-hcr estimate\n";
  Field(report, "model", config.model.path);
  Field(report, "data", options.data_path);
  Field(report, "horizon", std::to_string(y.horizon()), "steps");
  Field(report, "mode", config.mode);
  if (result.no_change) {
    Field(report, "k_hat", "none (no change within the horizon)");
  } else {
    Field(report, "k_hat", std::to_string(result.k_hat), "steps");
    Field(report, "k_hat_time", result.k_hat * config.system.dt(), "min");
  }
  Field(report, "u_hat", result.u_hat);
  Field(report, "candidates", std::to_string(result.candidate_set.size()));
  std::string excluded;
  for (int kappa : result.excluded) {
    excluded += (excluded.empty() ? "" : " ") + std::to_string(kappa);
  }
  Field(report, "excluded", excluded.empty() ? "none" : excluded);

  if (!options.out_path.empty()) {
    std::ofstream csv = OpenCsv(options.out_path);
    csv << "# config: " << DescribeConfig(config, "estimate")
        << " data=" << options.data_path << '\n';
    csv << "kappa,u_hat,residual\n";
    for (const CandidateFit& fit : result.residuals) {
      csv << fit.kappa << ',' << FormatNumber(fit.u_hat) << ','
          << FormatNumber(fit.residual) << '\n';
    }
    CloseCsv(csv, options.out_path);
  }
  return result;
}

MeasurementSeries CmdSimulate(const CommandOptions& options,
                              std::ostream& report) {
  if (options.out_path.empty()) {
    throw ConfigError("simulate needs an output path (--out <path>)");
  }
  const ScenarioConfig config = ResolveConfig(options);
  const MeasurementSeries y =
      config.seed_given
          ? SimulateNoisy(config.system, config.scenario, config.seed)
          : SimulateNoiseless(config.system, config.scenario);
  WriteMeasurementCsv(options.out_path, y);

  report << "# privacy-hcr simulate\n";
  Field(report, "model", config.model.path);
  Field(report, "k_star", std::to_string(config.scenario.k_star), "steps");
  Field(report, "horizon", std::to_string(config.scenario.horizon), "steps");
  Field(report, "noisy", y.noisy ? "true" : "false");
  if (y.seed) Field(report, "seed", std::to_string(*y.seed));
  Field(report, "out", options.out_path);
  return y;
}

TrialSummary CmdMonteCarlo(const CommandOptions& options,
                           std::ostream& report) {
  const ScenarioConfig config = ResolveConfig(options);
  const DiscreteLTISystem& sys = config.system;
  const StepScenario& sc = config.scenario;
  const TrialSummary summary =
      RunTrials(sys, sc, config.n_trials, config.seed, config.estimator);
  const BoundReport bound = HcrBound(sys, sc.k_star, sc.horizon);

  report << "# privacy-hcr montecarlo\n";
  Field(report, "model", config.model.path);
  Field(report, "k_star", std::to_string(sc.k_star), "steps");
  Field(report, "horizon", std::to_string(sc.horizon), "steps");
  Field(report, "sigma2", sys.sigma2());
  Field(report, "snr", Snr(sys, sc));
  Field(report, "trials", std::to_string(summary.n_trials));
  Field(report, "master_seed", std::to_string(summary.master_seed));
  Field(report, "excluded_trials", std::to_string(summary.excluded_trials));
  Field(report, "mean_k_hat", summary.empirical_mean, "steps");
  Field(report, "bias", summary.empirical_bias, "steps");
  Field(report, "vhat", summary.empirical_variance, "steps^2");
  Field(report, "vhat_se", summary.variance_standard_error, "steps^2");
  Field(report, "vhat_phys", UnitConvert(summary.empirical_variance, sys.dt()), "min^2");
  Field(report, "bound", bound.bound_steps2, "steps^2");
  Field(report, "bound_phys", bound.bound_phys, "min^2");
  Field(report, "vhat_plus_3se_ge_bound",
        summary.empirical_variance + 3 * summary.variance_standard_error >=
                bound.bound_steps2
            ? "true"
            : "false");

  if (!options.out_path.empty()) {
    std::ofstream csv = OpenCsv(options.out_path);
    csv << "# config: " << DescribeConfig(config, "montecarlo") << '\n';
    csv << "k_hat,count\n";
    for (const auto& [k_hat, count] : summary.histogram) {
      csv << k_hat << ',' << count << '\n';
    }
    CloseCsv(csv, options.out_path);
  }
  return summary;
}

void CmdSweep(const CommandOptions& options, std::ostream& report) {
  if (options.sweep.empty()) {
    throw ConfigError("sweep needs --sweep param:start:stop:steps");
  }
  const SweepSpec spec = ParseSweep(options.sweep);
  const ScenarioConfig config = ResolveConfig(options);
  const DiscreteLTISystem& base = config.system;
  const bool with_trials = options.trials.has_value();

  if (spec.parameter == "a" && base.n() != 1) {
    throw ConfigError("sweep over 'a' needs a one-state model (n = " +
                      std::to_string(base.n()) + ")");
  }
  if (spec.parameter == "dt" && !config.model.continuous) {
    throw ConfigError(
        "sweep over 'dt' needs a one-state model with a 'continuous' "
        "{f, h, c} section");
  }

  std::vector<SweepRow> rows;
  for (double value : spec.grid) {
    std::optional<DiscreteLTISystem> sys;
    StepScenario sc = config.scenario;
    if (spec.parameter == "sigma2") {
      sys = base.WithSigma2(value);
    } else if (spec.parameter == "a") {
      sys = DiscreteLTISystem::Scalar(value, base.B()(0), base.C()(0),
                                      base.sigma2(), base.dt());
    } else if (spec.parameter == "N") {
      sys = base;
      sc.horizon = static_cast<int>(std::lround(value));
      if (sc.horizon < 1) throw DomainError("swept horizon must be >= 1");
    } else {
      // Hold the wall-clock window N dt and the change instant k* dt fixed.
      if (!(value > 0.0)) throw DomainError("swept dt must be > 0");
      const ContinuousSpec& cs = *config.model.continuous;
      sys = ZohDiscretize(cs.f, cs.h, cs.c, value).WithSigma2(base.sigma2());
      const double window = config.scenario.horizon * base.dt();
      const double change = config.scenario.k_star * base.dt();
      sc.horizon = std::max(1, static_cast<int>(std::lround(window / value)));
      sc.k_star = std::min(sc.horizon - 1,
                           static_cast<int>(std::lround(change / value)));
    }
    if (sc.k_star >= sc.horizon) {
      throw DomainError("change time k* = " + std::to_string(sc.k_star) +
                        " is not inside the swept horizon N = " +
                        std::to_string(sc.horizon));
    }
    const BoundReport bound = HcrBound(*sys, sc.k_star, sc.horizon);
    SweepRow row{value, sc.k_star, sc.horizon, bound.bound_steps2,
                 bound.bound_phys, std::nullopt, sys->dt()};
    if (with_trials) {
      row.trials =
          RunTrials(*sys, sc, config.n_trials, config.seed, config.estimator);
    }
    rows.push_back(row);
  }

  auto write = [&](std::ostream& os) {
    os << "# config: " << DescribeConfig(config, "sweep")
       << " sweep=" << options.sweep << '\n';
    os << spec.parameter << ",k_star,horizon,bound_steps2,bound_min2";
    if (with_trials) os << ",vhat_steps2,vhat_se_steps2,vhat_min2";
    os << '\n';
    for (const SweepRow& row : rows) {
      os << FormatNumber(row.value) << ',' << row.k_star << ',' << row.horizon
         << ',' << FormatNumber(row.bound_steps2) << ','
         << FormatNumber(row.bound_min2);
      if (row.trials) {
        os << ',' << FormatNumber(row.trials->empirical_variance) << ','
           << FormatNumber(row.trials->variance_standard_error) << ','
           << FormatNumber(UnitConvert(row.trials->empirical_variance, row.dt));
      }
      os << '\n';
    }
  };

  if (options.out_path.empty()) {
    write(report);
  } else {
    std::ofstream csv = OpenCsv(options.out_path);
    write(csv);
    CloseCsv(csv, options.out_path);
    report << "# privacy-hcr sweep\n";
    Field(report, "parameter", spec.parameter);
    Field(report, "points", std::to_string(rows.size()));
    Field(report, "out", options.out_path);
  }
}

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Change-time privacy bounds for noisy LTI sensors",
               "privacy-hcr"};
  app.require_subcommand(1);

  CommandOptions options;
  int k_star = 0, horizon = 0, trials = 0;
  std::uint64_t seed = 0;
  double sigma2 = 0.0, dt = 0.0, amplitude = 0.0;
  std::string mode;
  std::vector<double> x0;

  struct Flags {
    CLI::Option* k_star = nullptr;
    CLI::Option* horizon = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* trials = nullptr;
    CLI::Option* mode = nullptr;
    CLI::Option* sigma2 = nullptr;
    CLI::Option* dt = nullptr;
    CLI::Option* amplitude = nullptr;
    CLI::Option* x0 = nullptr;
  };
  std::vector<Flags> flags;

  auto add_common = [&](CLI::App* sub) {
    Flags f;
    sub->add_option("--model", options.model_path, "Model file (JSON)")
        ->required();
    sub->add_option("--scenario", options.scenario_path,
                    "Scenario sidecar file (JSON)");
    f.k_star = sub->add_option("--k-star", k_star, "Change time k* [steps]");
    f.horizon = sub->add_option("--horizon", horizon, "Horizon N [steps]");
    f.seed = sub->add_option("--seed", seed, "Random seed");
    f.trials = sub->add_option("--trials", trials, "Monte Carlo trials");
    f.mode = sub->add_option("--mode", mode, "Estimator mode: ls | fixed:VALUE");
    f.sigma2 = sub->add_option("--sigma2", sigma2, "Override noise variance");
    f.dt = sub->add_option("--dt", dt, "Override sample period [min]");
    f.amplitude = sub->add_option("--amplitude", amplitude, "Step amplitude");
    f.x0 = sub->add_option("--x0", x0, "Initial state, comma separated")
               ->delimiter(',');
    sub->add_option("--out", options.out_path, "Output CSV path");
    flags.push_back(f);
  };

  CLI::App* bound = app.add_subcommand("bound", "Variance lower bound");
  add_common(bound);
  CLI::App* estimate =
      app.add_subcommand("estimate", "Least-squares change-time estimate");
  add_common(estimate);
  estimate->add_option("--data", options.data_path, "Measurement CSV (k,y)")
      ->required();
  estimate->add_flag("--no-change", options.include_no_change,
                     "Also score the no-change hypothesis");
  estimate->add_flag("--clamp", options.clamp_amplitude,
                     "Clamp the fitted amplitude to [0, 1]");
  CLI::App* simulate = app.add_subcommand("simulate", "Simulate a step response");
  add_common(simulate);
  CLI::App* montecarlo =
      app.add_subcommand("montecarlo", "Seeded estimator trials");
  add_common(montecarlo);
  montecarlo->add_flag("--no-change", options.include_no_change,
                       "Also score the no-change hypothesis");
  montecarlo->add_flag("--clamp", options.clamp_amplitude,
                       "Clamp the fitted amplitude to [0, 1]");
  CLI::App* sweep = app.add_subcommand("sweep", "Bound over a parameter grid");
  add_common(sweep);
  sweep->add_option("--sweep", options.sweep, "param:start:stop:steps")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  for (const Flags& f : flags) {
    if (f.k_star->count()) options.k_star = k_star;
    if (f.horizon->count()) options.horizon = horizon;
    if (f.seed->count()) options.seed = seed;
    if (f.trials->count()) options.trials = trials;
    if (f.mode->count()) options.mode = mode;
    if (f.sigma2->count()) options.sigma2 = sigma2;
    if (f.dt->count()) options.dt = dt;
    if (f.amplitude->count()) options.amplitude = amplitude;
    if (f.x0->count()) options.x0 = x0;
  }

  try {
    if (bound->parsed()) {
      CmdBound(options, out);
    } else if (estimate->parsed()) {
      CmdEstimate(options, out);
    } else if (simulate->parsed()) {
      CmdSimulate(options, out);
    } else if (montecarlo->parsed()) {
      CmdMonteCarlo(options, out);
    } else if (sweep->parsed()) {
      CmdSweep(options, out);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitOk;
}

}  // namespace privacy_hcr::cli
