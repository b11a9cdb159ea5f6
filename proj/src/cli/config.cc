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

#include "privacy_hcr/cli/config.h"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "privacy_hcr/errors.h"

namespace privacy_hcr::cli {
namespace {

using nlohmann::json;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

json ParseJson(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // The message carries "at line L, column C".
    throw ConfigError(source + ": " + e.what());
  }
}

[[noreturn]] void FieldError(const std::string& source,
                             const std::string& field,
                             const std::string& problem) {
  throw ConfigError(source + ": field '" + field + "' " + problem);
}

double GetNumber(const json& obj, const std::string& field,
                 const std::string& source) {
  const auto it = obj.find(field);
  if (it == obj.end()) FieldError(source, field, "is missing");
  if (!it->is_number()) FieldError(source, field, "must be a number");
  const double value = it->get<double>();
  if (!std::isfinite(value)) FieldError(source, field, "must be finite");
  return value;
}

std::vector<double> GetArray(const json& obj, const std::string& field,
                             std::size_t expected, const std::string& source) {
  const auto it = obj.find(field);
  if (it == obj.end()) FieldError(source, field, "is missing");
  if (!it->is_array()) FieldError(source, field, "must be an array of numbers");
  if (it->size() != expected) {
    FieldError(source, field,
               "must have " + std::to_string(expected) + " entries, got " +
                   std::to_string(it->size()));
  }
  std::vector<double> values;
  values.reserve(expected);
  for (std::size_t i = 0; i < it->size(); ++i) {
    const json& v = (*it)[i];
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
      FieldError(source, field + "[" + std::to_string(i) + "]",
                 "must be a finite number");
    }
    values.push_back(v.get<double>());
  }
  return values;
}

int GetInt(const json& obj, const std::string& field,
           const std::string& source) {
  const auto it = obj.find(field);
  if (it == obj.end()) FieldError(source, field, "is missing");
  if (!it->is_number_integer()) FieldError(source, field, "must be an integer");
  const auto value = it->get<long long>();
  if (value < INT32_MIN || value > INT32_MAX) {
    FieldError(source, field, "is out of range");
  }
  return static_cast<int>(value);
}

ScenarioDefaults ParseScenario(const json& obj, const std::string& source) {
  if (!obj.is_object()) throw ConfigError(source + ": scenario must be an object");
  ScenarioDefaults out;
  for (const auto& [key, value] : obj.items()) {
    if (key == "k_star") {
      out.k_star = GetInt(obj, key, source);
    } else if (key == "horizon") {
      out.horizon = GetInt(obj, key, source);
    } else if (key == "trials") {
      out.trials = GetInt(obj, key, source);
    } else if (key == "amplitude") {
      out.amplitude = GetNumber(obj, key, source);
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) {
        FieldError(source, key, "must be a non-negative integer");
      }
      out.seed = value.get<std::uint64_t>();
    } else if (key == "x0") {
      out.x0 = GetArray(obj, key, value.is_array() ? value.size() : 0, source);
    } else if (key == "mode") {
      if (!value.is_string()) FieldError(source, key, "must be a string");
      out.mode = value.get<std::string>();
    } else {
      FieldError(source, key, "is not a recognized scenario field");
    }
  }
  return out;
}

template <typename T>
std::optional<T> FirstOf(const std::optional<T>& a, const std::optional<T>& b,
                         const std::optional<T>& c) {
  if (a) return a;
  if (b) return b;
  return c;
}

std::string Trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool ParseDouble(const std::string& text, double* value) {
  if (text.empty()) return false;
  errno = 0;
  char* end = nullptr;
  *value = std::strtod(text.c_str(), &end);
  return end == text.c_str() + text.size() && errno != ERANGE &&
         std::isfinite(*value);
}

bool ParseLong(const std::string& text, long long* value) {
  if (text.empty()) return false;
  errno = 0;
  char* end = nullptr;
  *value = std::strtoll(text.c_str(), &end, 10);
  return end == text.c_str() + text.size() && errno != ERANGE;
}

}  // namespace

ModelFile ParseModel(const std::string& text, const std::string& source) {
  const json doc = ParseJson(text, source);
  if (!doc.is_object()) throw ConfigError(source + ": model must be a JSON object");

  static const char* kKnown[] = {"n",  "A",          "B",          "C",
                                 "sigma2", "dt_minutes", "continuous",
                                 "scenario", "name",   "description"};
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    for (const char* k : kKnown) known = known || key == k;
    if (!known) FieldError(source, key, "is not a recognized model field");
  }

  const double sigma2 = GetNumber(doc, "sigma2", source);
  if (sigma2 < 0.0) FieldError(source, "sigma2", "must be >= 0");
  const double dt = GetNumber(doc, "dt_minutes", source);
  if (dt <= 0.0) FieldError(source, "dt_minutes", "must be > 0");

  std::optional<ContinuousSpec> continuous;
  if (const auto it = doc.find("continuous"); it != doc.end()) {
    if (!it->is_object()) FieldError(source, "continuous", "must be an object");
    const std::string sub = source + " (continuous)";
    continuous = ContinuousSpec{GetNumber(*it, "f", sub), GetNumber(*it, "h", sub),
                                GetNumber(*it, "c", sub)};
  }

  std::optional<DiscreteLTISystem> system;
  if (doc.contains("A") || !continuous) {
    if (!doc.contains("n")) FieldError(source, "n", "is missing");
    const int n = GetInt(doc, "n", source);
    if (n < 1) FieldError(source, "n", "must be >= 1");
    const std::vector<double> a = GetArray(doc, "A", std::size_t(n) * n, source);
    const std::vector<double> b = GetArray(doc, "B", n, source);
    const std::vector<double> c = GetArray(doc, "C", n, source);
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = a[std::size_t(i) * n + j];
    system.emplace(A, Eigen::Map<const Eigen::VectorXd>(b.data(), n),
                   Eigen::Map<const Eigen::RowVectorXd>(c.data(), n), sigma2, dt);
  } else {
    const DiscreteLTISystem sampled =
        ZohDiscretize(continuous->f, continuous->h, continuous->c, dt);
    system.emplace(sampled.WithSigma2(sigma2));
  }

  ScenarioDefaults scenario;
  if (const auto it = doc.find("scenario"); it != doc.end()) {
    scenario = ParseScenario(*it, source + " (scenario)");
  }
  return ModelFile{source, *system, continuous, scenario};
}

ModelFile LoadModelFile(const std::string& path) {
  return ParseModel(ReadFile(path), path);
}

ScenarioDefaults LoadScenarioFile(const std::string& path) {
  return ParseScenario(ParseJson(ReadFile(path), path), path);
}

EstimatorOptions ParseMode(const std::string& mode) {
  if (mode == "ls") return EstimatorOptions{};
  constexpr std::string_view kFixed = "fixed:";
  if (mode.rfind(kFixed, 0) == 0) {
    double value = 0.0;
    if (!ParseDouble(mode.substr(kFixed.size()), &value)) {
      throw ConfigError("--mode fixed:VALUE needs a finite number, got '" +
                        mode + "'");
    }
    return EstimatorOptions::Fixed(value);
  }
  throw ConfigError("--mode must be 'ls' or 'fixed:VALUE', got '" + mode + "'");
}

SweepSpec ParseSweep(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() != 4) {
    throw ConfigError("--sweep must look like param:start:stop:steps, got '" +
                      text + "'");
  }
  SweepSpec spec;
  spec.parameter = parts[0];
  if (spec.parameter != "sigma2" && spec.parameter != "a" &&
      spec.parameter != "dt" && spec.parameter != "N") {
    throw ConfigError("--sweep parameter must be one of sigma2, a, dt, N; got '" +
                      spec.parameter + "'");
  }
  double start = 0.0, stop = 0.0;
  long long steps = 0;
  if (!ParseDouble(parts[1], &start) || !ParseDouble(parts[2], &stop)) {
    throw ConfigError("--sweep start and stop must be numbers");
  }
  if (!ParseLong(parts[3], &steps) || steps < 1 || steps > 1000000) {
    throw ConfigError("--sweep steps must be an integer in [1, 1000000]");
  }
  for (long long i = 0; i < steps; ++i) {
    spec.grid.push_back(steps == 1 ? start
                                   : start + (stop - start) * static_cast<double>(i) /
                                                 static_cast<double>(steps - 1));
  }
  return spec;
}

ScenarioConfig ResolveConfig(const CommandOptions& options,
                             bool require_horizon) {
  if (options.model_path.empty()) throw ConfigError("--model is required");
  ModelFile model = LoadModelFile(options.model_path);
  ScenarioDefaults sidecar;
  if (!options.scenario_path.empty()) {
    sidecar = LoadScenarioFile(options.scenario_path);
  }
  const ScenarioDefaults& file = model.scenario;

  DiscreteLTISystem sys = model.system;
  if (options.sigma2) {
    if (!(*options.sigma2 >= 0.0)) throw ConfigError("--sigma2 must be >= 0");
    sys = sys.WithSigma2(*options.sigma2);
  }
  if (options.dt) {
    if (!(*options.dt > 0.0)) throw ConfigError("--dt must be > 0");
    sys = model.continuous
              ? ZohDiscretize(model.continuous->f, model.continuous->h,
                              model.continuous->c, *options.dt)
                    .WithSigma2(sys.sigma2())
              : sys.WithDt(*options.dt);
  }

  ScenarioConfig config(model, sys);

  const auto horizon = FirstOf(options.horizon, sidecar.horizon, file.horizon);
  const auto k_star = FirstOf(options.k_star, sidecar.k_star, file.k_star);
  config.horizon_given = horizon.has_value();
  if (!horizon && require_horizon) {
    throw ConfigError("horizon N is required (--horizon or scenario.horizon)");
  }
  config.scenario.horizon = horizon.value_or(0);
  config.scenario.k_star = k_star.value_or(0);
  if (horizon && *horizon < 1) throw ConfigError("horizon N must be >= 1");
  if (k_star && *k_star < 0) throw ConfigError("change time k* must be >= 0");
  if (horizon && config.scenario.k_star >= *horizon) {
    throw DomainError("change time must satisfy k* < N (k* = " +
                      std::to_string(config.scenario.k_star) +
                      ", N = " + std::to_string(*horizon) + ")");
  }

  if (const auto x0 = FirstOf(options.x0, sidecar.x0, file.x0)) {
    if (static_cast<int>(x0->size()) != sys.n()) {
      throw ConfigError("x0 must have " + std::to_string(sys.n()) +
                        " entries, got " + std::to_string(x0->size()));
    }
    config.scenario.x0 =
        Eigen::Map<const Eigen::VectorXd>(x0->data(), sys.n());
  }
  config.scenario.amplitude =
      FirstOf(options.amplitude, sidecar.amplitude, file.amplitude).value_or(1.0);

  const auto seed = FirstOf(options.seed, sidecar.seed, file.seed);
  config.seed_given = seed.has_value();
  config.seed = seed.value_or(kDefaultSeed);
  config.n_trials =
      FirstOf(options.trials, sidecar.trials, file.trials).value_or(kDefaultTrials);
  if (config.n_trials < 1) throw ConfigError("number of trials must be >= 1");

  config.mode = FirstOf(options.mode, sidecar.mode, file.mode).value_or("ls");
  config.estimator = ParseMode(config.mode);
  config.estimator.include_no_change = options.include_no_change;
  config.estimator.clamp_amplitude = options.clamp_amplitude;
  return config;
}

MeasurementSeries ReadMeasurementCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open measurement file '" + path + "'");
  MeasurementSeries series;
  bool header_seen = false;
  int line_number = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_number;
    const std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    const std::string where = path + ":" + std::to_string(line_number) + ": ";
    const auto comma = trimmed.find(',');
    if (comma == std::string::npos ||
        trimmed.find(',', comma + 1) != std::string::npos) {
      throw ConfigError(where + "expected two columns 'k,y'");
    }
    const std::string first = Trim(trimmed.substr(0, comma));
    const std::string second = Trim(trimmed.substr(comma + 1));
    if (!header_seen) {
      if (first != "k" || second != "y") {
        throw ConfigError(where + "expected header 'k,y'");
      }
      header_seen = true;
      continue;
    }
    long long k = 0;
    double y = 0.0;
    if (!ParseLong(first, &k)) throw ConfigError(where + "k is not an integer");
    if (k != static_cast<long long>(series.values.size())) {
      throw ConfigError(where + "expected k = " +
                        std::to_string(series.values.size()) + ", got " + first);
    }
    if (!ParseDouble(second, &y)) {
      throw ConfigError(where + "y is not a finite number: '" + second + "'");
    }
    series.values.push_back(y);
  }
  if (!header_seen) throw ConfigError(path + ": missing header 'k,y'");
  if (series.values.size() < 2) {
    throw ConfigError(path + ": need at least two samples (k = 0..N, N >= 1)");
  }
  return series;
}

void WriteMeasurementCsv(const std::string& path, const MeasurementSeries& y) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << "k,y\n";
  for (std::size_t k = 0; k < y.values.size(); ++k) {
    out << k << ',' << FormatNumber(y.values[k]) << '\n';
  }
  if (!out) throw ConfigError("error while writing '" + path + "'");
}

std::string FormatNumber(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string DescribeConfig(const ScenarioConfig& config,
                           const std::string& command) {
  const DiscreteLTISystem& sys = config.system;
  json j;
  j["command"] = command;
  j["model_path"] = config.model.path;
  j["n"] = sys.n();
  std::vector<double> a;
  for (int r = 0; r < sys.n(); ++r)
    for (int c = 0; c < sys.n(); ++c) a.push_back(sys.A()(r, c));
  j["A"] = a;
  j["B"] = std::vector<double>(sys.B().data(), sys.B().data() + sys.n());
  j["C"] = std::vector<double>(sys.C().data(), sys.C().data() + sys.n());
  j["sigma2"] = sys.sigma2();
  j["dt_minutes"] = sys.dt();
  j["k_star"] = config.scenario.k_star;
  j["horizon"] = config.scenario.horizon;
  const Eigen::VectorXd x0 = config.scenario.InitialState(sys.n());
  j["x0"] = std::vector<double>(x0.data(), x0.data() + x0.size());
  j["amplitude"] = config.scenario.amplitude;
  j["seed"] = config.seed;
  j["trials"] = config.n_trials;
  j["mode"] = config.mode;
  j["no_change_hypothesis"] = config.estimator.include_no_change;
  j["clamp_amplitude"] = config.estimator.clamp_amplitude;
  return j.dump();
}

}  // namespace privacy_hcr::cli
