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

#ifndef PRIVACY_HCR_MONTE_CARLO_H_
#define PRIVACY_HCR_MONTE_CARLO_H_

#include <cstdint>
#include <map>
#include <vector>

#include "privacy_hcr/change_point.h"
#include "privacy_hcr/hcr_bound.h"
#include "privacy_hcr/lti.h"

namespace privacy_hcr {

// Environment variable capping the number of worker threads.
inline constexpr char kThreadsEnvVar[] = "PRIVACY_HCR_THREADS";

// `requested` if positive, else the value of PRIVACY_HCR_THREADS, else the
// hardware concurrency. Always >= 1.
int ResolveThreadCount(int requested = 0);

struct TrialSummary {
  int n_trials = 0;
  int k_star = 0;
  std::uint64_t master_seed = 0;
  int excluded_trials = 0;
  double empirical_mean = 0.0;      // steps
  double empirical_bias = 0.0;      // mean - k*, steps
  double empirical_variance = 0.0;  // about the mean, steps^2
  double variance_standard_error = 0.0;
  std::map<int, int> histogram;     // k_hat -> count
};

// Sample variance (n - 1 denominator) of `values` and its standard error
// estimated from the fourth central moment. Both are 0 for fewer than two
// values.
struct VarianceEstimate {
  double mean = 0.0;
  double variance = 0.0;
  double standard_error = 0.0;
};
VarianceEstimate EstimateVariance(const std::vector<double>& values);

// Runs `n_trials` noisy simulations of `scenario`, trial i seeded with
// SubstreamSeed(master_seed, i), and summarizes the change-time estimates.
// The summary does not depend on `threads`. Throws DomainError if
// sigma2 == 0.
TrialSummary RunTrials(const DiscreteLTISystem& sys,
                       const StepScenario& scenario, int n_trials,
                       std::uint64_t master_seed,
                       const EstimatorOptions& options = {}, int threads = 0);

// Empirical bias g(k) = E[k_hat | k] - k of the estimator for every change
// time k = 0..N, each from `n_trials` trials of a unit step from the zero
// state. g(N) is measured on step-free data, a change at N being invisible
// within the horizon. Trials use RunTrials with master seed
// SubstreamSeed(master_seed, k).
BiasFunction MeasureBias(const DiscreteLTISystem& sys, int horizon,
                         int n_trials, std::uint64_t master_seed,
                         const EstimatorOptions& options = {}, int threads = 0);

// Peak squared noiseless deviation from the free response, over sigma2.
double Snr(const DiscreteLTISystem& sys, const StepScenario& scenario);

struct MomentEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  double s = 0.0;  // S(tau) of the configuration
};

// Monte Carlo estimate of E[(P(Y | k*+tau) / P(Y | k*) - 1)^2 | k*] for a
// unit step from the zero state, whose exact value is e^{S(tau)} - 1.
// Guarded to S <= 5, N <= 10 and n_samples >= 1e5; violations throw
// DomainError.
MomentEstimate LikelihoodRatioMoment(const DiscreteLTISystem& sys, int k_star,
                                     int tau, int horizon, int n_samples,
                                     std::uint64_t seed);

}  // namespace privacy_hcr

#endif  // PRIVACY_HCR_MONTE_CARLO_H_
