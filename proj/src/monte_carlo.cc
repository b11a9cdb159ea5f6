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

#include "privacy_hcr/monte_carlo.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "privacy_hcr/errors.h"
#include "privacy_hcr/hcr_bound.h"
#include "privacy_hcr/rng.h"

namespace privacy_hcr {
namespace {

constexpr double kMaxMomentS = 5.0;
constexpr int kMaxMomentHorizon = 10;
constexpr int kMinMomentSamples = 100000;

}  // namespace

int ResolveThreadCount(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv(kThreadsEnvVar); env != nullptr) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) {
      return static_cast<int>(std::min<long>(value, 1024));
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

VarianceEstimate EstimateVariance(const std::vector<double>& values) {
  VarianceEstimate out;
  const std::size_t n = values.size();
  if (n == 0) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(n);
  if (n < 2) return out;

  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : values) {
    const double d = v - out.mean;
    const double d2 = d * d;
    m2 += d2;
    m4 += d2 * d2;
  }
  const double nd = static_cast<double>(n);
  out.variance = m2 / (nd - 1.0);
  m4 /= nd;
  // Var(s^2) ~ (mu4 - sigma^4 (n - 3) / (n - 1)) / n.
  const double var_of_var =
      (m4 - out.variance * out.variance * (nd - 3.0) / (nd - 1.0)) / nd;
  out.standard_error = std::sqrt(std::max(var_of_var, 0.0));
  return out;
}

TrialSummary RunTrials(const DiscreteLTISystem& sys,
                       const StepScenario& scenario, int n_trials,
                       std::uint64_t master_seed,
                       const EstimatorOptions& options, int threads) {
  if (n_trials < 1) throw ConfigError("number of trials must be >= 1");
  if (sys.sigma2() == 0.0) {
    throw DomainError("noise variance must be positive for Monte Carlo trials");
  }
  scenario.Validate(sys.n());
  const Eigen::VectorXd x0 = scenario.InitialState(sys.n());

  // One slot per trial; workers write disjoint slots and aggregation below
  // runs in trial order, so the summary is independent of scheduling.
  std::vector<std::optional<int>> estimates(n_trials);
  auto run_range = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      const MeasurementSeries y = SimulateNoisy(
          sys, scenario, SubstreamSeed(master_seed, static_cast<std::uint64_t>(i)));
      try {
        estimates[i] = EstimateChange(y, sys, x0, options).k_hat;
      } catch (const EstimationError&) {
        estimates[i].reset();
      }
    }
  };

  const int workers = std::min(ResolveThreadCount(threads), n_trials);
  if (workers <= 1) {
    run_range(0, n_trials);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      const int begin = static_cast<int>(static_cast<long long>(n_trials) * w / workers);
      const int end = static_cast<int>(static_cast<long long>(n_trials) * (w + 1) / workers);
      pool.emplace_back(run_range, begin, end);
    }
  }

  TrialSummary summary;
  summary.n_trials = n_trials;
  summary.k_star = scenario.k_star;
  summary.master_seed = master_seed;
  std::vector<double> values;
  values.reserve(n_trials);
  for (const std::optional<int>& k_hat : estimates) {
    if (!k_hat) {
      ++summary.excluded_trials;
      continue;
    }
    ++summary.histogram[*k_hat];
    values.push_back(*k_hat);
  }
  const VarianceEstimate v = EstimateVariance(values);
  summary.empirical_mean = v.mean;
  summary.empirical_bias = values.empty() ? 0.0 : v.mean - scenario.k_star;
  summary.empirical_variance = v.variance;
  summary.variance_standard_error = v.standard_error;
  return summary;
}

BiasFunction MeasureBias(const DiscreteLTISystem& sys, int horizon,
                         int n_trials, std::uint64_t master_seed,
                         const EstimatorOptions& options, int threads) {
  if (horizon < 1) throw ConfigError("horizon N must be >= 1");
  std::vector<double> bias(horizon + 1);
  for (int k = 0; k <= horizon; ++k) {
    // A change at N leaves y_0..y_N untouched: simulate it as a zero step.
    const StepScenario sc{.k_star = std::min(k, horizon - 1),
                          .horizon = horizon,
                          .x0 = {},
                          .amplitude = k == horizon ? 0.0 : 1.0};
    const TrialSummary s =
        RunTrials(sys, sc, n_trials, SubstreamSeed(master_seed, k), options,
                  threads);
    if (s.excluded_trials == n_trials) {
      throw EstimationError("no successful trial for change time " +
                            std::to_string(k));
    }
    bias[k] = s.empirical_mean - k;
  }
  return BiasFunction(std::move(bias));
}

double Snr(const DiscreteLTISystem& sys, const StepScenario& scenario) {
  if (!(sys.sigma2() > 0.0)) {
    throw DomainError("noise variance must be positive to compute the SNR");
  }
  scenario.Validate(sys.n());
  if (scenario.amplitude == 0.0) return 0.0;
  const std::vector<double> s =
      StepSignature(sys, scenario.k_star, scenario.horizon);
  double peak = 0.0;
  for (double v : s) peak = std::max(peak, std::abs(scenario.amplitude * v));
  return peak * peak / sys.sigma2();
}

MomentEstimate LikelihoodRatioMoment(const DiscreteLTISystem& sys, int k_star,
                                     int tau, int horizon, int n_samples,
                                     std::uint64_t seed) {
  if (horizon > kMaxMomentHorizon) {
    throw DomainError("likelihood-ratio moment requires N <= " +
                      std::to_string(kMaxMomentHorizon));
  }
  if (n_samples < kMinMomentSamples) {
    throw DomainError("likelihood-ratio moment requires at least " +
                      std::to_string(kMinMomentSamples) + " samples");
  }
  MomentEstimate out;
  out.s = STau(sys, k_star, horizon, tau);
  if (out.s > kMaxMomentS) {
    throw DomainError("likelihood-ratio moment requires S <= 5, got S = " +
                      std::to_string(out.s));
  }

  // Means of Y under change times k* and k* + tau (zero initial state, unit
  // step). A change at N leaves the horizon untouched.
  const std::vector<double> g = UnitStepResponse(sys, horizon);
  auto mean_for = [&](int kappa) {
    std::vector<double> mu(horizon + 1, 0.0);
    for (int k = kappa + 1; k <= horizon; ++k) mu[k] = g[k - kappa - 1];
    return mu;
  };
  const std::vector<double> mu0 = mean_for(k_star);
  const std::vector<double> mu1 = mean_for(k_star + tau);

  Engine engine = MakeEngine(seed);
  const double sigma = std::sqrt(sys.sigma2());
  const double inv_two_var = 0.5 / sys.sigma2();
  std::vector<double> samples(n_samples);
  for (double& sample : samples) {
    double log_ratio = 0.0;
    for (int k = 0; k <= horizon; ++k) {
      const double y = mu0[k] + sigma * StandardNormal(engine);
      const double d0 = y - mu0[k];
      const double d1 = y - mu1[k];
      log_ratio += (d0 * d0 - d1 * d1) * inv_two_var;
    }
    const double deviation = std::expm1(log_ratio);
    sample = deviation * deviation;
  }
  double sum = 0.0;
  for (double v : samples) sum += v;
  out.mean = sum / n_samples;
  double m2 = 0.0;
  for (double v : samples) m2 += (v - out.mean) * (v - out.mean);
  out.standard_error = std::sqrt(m2 / (n_samples - 1.0) / n_samples);
  return out;
}

}  // namespace privacy_hcr
