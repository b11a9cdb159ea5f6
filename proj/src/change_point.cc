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

#include "privacy_hcr/change_point.h"

#include <algorithm>
#include <numeric>
#include <string>

namespace privacy_hcr {

EstimationResult EstimateChange(const MeasurementSeries& y,
                                const DiscreteLTISystem& sys,
                                const Eigen::VectorXd& x0,
                                const EstimatorOptions& options) {
  const int horizon = y.horizon();
  if (horizon < 1) {
    throw ConfigError("measurement series needs at least two samples");
  }
  if (x0.size() != 0 && x0.size() != sys.n()) {
    throw ConfigError("initial state x0 must have " +
                      std::to_string(sys.n()) + " entries");
  }

  EstimationResult result;
  result.candidate_set = options.candidates;
  if (result.candidate_set.empty()) {
    result.candidate_set.resize(horizon);
    std::iota(result.candidate_set.begin(), result.candidate_set.end(), 0);
  } else {
    std::sort(result.candidate_set.begin(), result.candidate_set.end());
    result.candidate_set.erase(std::unique(result.candidate_set.begin(),
                                           result.candidate_set.end()),
                               result.candidate_set.end());
  }
  for (int kappa : result.candidate_set) {
    if (kappa < 0 || kappa >= horizon) {
      throw ConfigError("candidate change time " + std::to_string(kappa) +
                        " outside [0, " + std::to_string(horizon - 1) + "]");
    }
  }

  const std::vector<double> free = FreeResponse(sys, x0, horizon);
  std::vector<double> r(horizon + 1);
  for (int k = 0; k <= horizon; ++k) r[k] = y.values[k] - free[k];
  // s_k(kappa) = g[k - kappa - 1] for k > kappa.
  const std::vector<double> g = UnitStepResponse(sys, horizon);

  double before = 0.0;  // sum_{k <= kappa} r_k^2, advanced incrementally
  int next_prefix = 0;
  for (int kappa : result.candidate_set) {
    for (; next_prefix <= kappa; ++next_prefix) {
      before += r[next_prefix] * r[next_prefix];
    }
    const int length = horizon - kappa;
    double ss = 0.0;
    double rs = 0.0;
    for (int j = 0; j < length; ++j) {
      ss += g[j] * g[j];
      rs += r[kappa + 1 + j] * g[j];
    }

    double u_hat;
    if (options.mode == EstimatorOptions::Mode::kFixedAmplitude) {
      u_hat = options.fixed_amplitude;
    } else {
      if (ss == 0.0) {
        result.excluded.push_back(kappa);
        continue;
      }
      u_hat = rs / ss;
      if (options.clamp_amplitude) u_hat = std::clamp(u_hat, 0.0, 1.0);
    }

    double residual = before;
    for (int j = 0; j < length; ++j) {
      const double e = r[kappa + 1 + j] - u_hat * g[j];
      residual += e * e;
    }
    result.residuals.push_back({kappa, u_hat, residual});
  }

  if (result.residuals.empty() && !options.include_no_change) {
    throw EstimationError(
        "every candidate change time has an identically zero step signature; "
        "the amplitude is unidentifiable");
  }

  bool have_best = false;
  double best = 0.0;
  for (const CandidateFit& fit : result.residuals) {
    if (!have_best || fit.residual < best) {
      best = fit.residual;
      result.k_hat = fit.kappa;
      result.u_hat = fit.u_hat;
      have_best = true;
    }
  }
  if (options.include_no_change) {
    result.no_change_residual =
        std::accumulate(r.begin(), r.end(), 0.0,
                        [](double acc, double v) { return acc + v * v; });
    if (!have_best || result.no_change_residual < best) {
      result.no_change = true;
      result.k_hat = horizon;
      result.u_hat = 0.0;
    }
  }
  return result;
}

}  // namespace privacy_hcr
