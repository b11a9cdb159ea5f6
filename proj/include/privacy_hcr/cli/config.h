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

#ifndef PRIVACY_HCR_CLI_CONFIG_H_
#define PRIVACY_HCR_CLI_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "privacy_hcr/change_point.h"
#include "privacy_hcr/lti.h"

namespace privacy_hcr::cli {

// dx/dt = -f x + h u, y = c x; sampled with ZohDiscretize.
struct ContinuousSpec {
  double f = 0.0;
  double h = 0.0;
  double c = 1.0;
};

// Scenario fields that may appear in a model file ("scenario" object) or in
// a sidecar file. Command line flags take precedence over both.
struct ScenarioDefaults {
  std::optional<int> k_star;
  std::optional<int> horizon;
  std::optional<std::vector<double>> x0;
  std::optional<double> amplitude;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<std::string> mode;
};

// Model file (JSON):
//   {
//     "n": 2,
//     "A": [a11, a12, a21, a22],     // row-major
//     "B": [b1, b2],
//     "C": [c1, c2],
//     "sigma2": 0.25,
//     "dt_minutes": 9,
//     "continuous": {"f": 0.1, "h": 0.1, "c": 1},   // optional, one state
//     "scenario": {"k_star": 10, "horizon": 60}     // optional
//   }
// A, B, C and n may be omitted when "continuous" is given; the discrete
// system is then its zero-order-hold sampling at dt_minutes.
struct ModelFile {
  std::string path;
  DiscreteLTISystem system;
  std::optional<ContinuousSpec> continuous;
  ScenarioDefaults scenario;
};

// Throws ConfigError naming the file and offending field (or the line and
// column of a syntax error).
ModelFile LoadModelFile(const std::string& path);
ModelFile ParseModel(const std::string& text, const std::string& source);
ScenarioDefaults LoadScenarioFile(const std::string& path);

// Values collected from the command line; unset fields fall back to the
// scenario sidecar, then to the model file, then to built-in defaults.
struct CommandOptions {
  std::string model_path;
  std::string scenario_path;
  std::optional<int> k_star;
  std::optional<int> horizon;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<std::string> mode;
  std::optional<double> sigma2;
  std::optional<double> dt;
  std::optional<double> amplitude;
  std::optional<std::vector<double>> x0;
  std::string out_path;
  std::string data_path;
  std::string sweep;
  bool include_no_change = false;
  bool clamp_amplitude = false;
};

inline constexpr std::uint64_t kDefaultSeed = 1;
inline constexpr int kDefaultTrials = 1000;

struct ScenarioConfig {
  ScenarioConfig(ModelFile model_file, DiscreteLTISystem sys)
      : model(std::move(model_file)), system(std::move(sys)) {}

  ModelFile model;
  DiscreteLTISystem system;  // after sigma2/dt overrides
  StepScenario scenario;
  bool horizon_given = false;
  std::uint64_t seed = kDefaultSeed;
  bool seed_given = false;
  int n_trials = kDefaultTrials;
  std::string mode = "ls";
  EstimatorOptions estimator;
};

// Throws ConfigError for malformed input and DomainError when k* >= N.
// When `require_horizon` is false and no horizon is configured, the
// scenario horizon is left at 0 for the caller to fill in.
ScenarioConfig ResolveConfig(const CommandOptions& options,
                             bool require_horizon = true);

// "ls" or "fixed:VALUE".
EstimatorOptions ParseMode(const std::string& mode);

struct SweepSpec {
  std::string parameter;  // sigma2 | a | dt | N
  std::vector<double> grid;
};

// "param:start:stop:steps", steps >= 1 evenly spaced points.
SweepSpec ParseSweep(const std::string& text);

// Measurement CSV: header "k,y", then one row per sample with k = 0, 1, ...
// Lines starting with '#' are ignored. Throws ConfigError with the line
// number of the first bad row.
MeasurementSeries ReadMeasurementCsv(const std::string& path);
void WriteMeasurementCsv(const std::string& path, const MeasurementSeries& y);

// Round-trip formatting for CSV cells; "inf" for infinities.
std::string FormatNumber(double value);

// One-line JSON record of the resolved configuration for report headers.
std::string DescribeConfig(const ScenarioConfig& config,
                           const std::string& command);

}  // namespace privacy_hcr::cli

#endif  // PRIVACY_HCR_CLI_CONFIG_H_
