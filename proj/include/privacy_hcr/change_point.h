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

#ifndef PRIVACY_HCR_CHANGE_POINT_H_
#define PRIVACY_HCR_CHANGE_POINT_H_

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "privacy_hcr/errors.h"
#include "privacy_hcr/lti.h"

namespace privacy_hcr {

// Thrown when no candidate change time can be fitted.
class EstimationError : public DomainError {
 public:
  using DomainError::DomainError;
};

struct EstimatorOptions {
  enum class Mode { kLsAmplitude, kFixedAmplitude };

  Mode mode = Mode::kLsAmplitude;
  double fixed_amplitude = 1.0;  // used in kFixedAmplitude
  // Candidate change times; empty means {0, ..., N-1}.
  std::vector<int> candidates;
  // Also score the hypothesis that no change happens within the horizon.
  bool include_no_change = false;
  // Clamp the least-squares amplitude to [0, 1].
  bool clamp_amplitude = false;

  static EstimatorOptions Fixed(double amplitude) {
    EstimatorOptions options;
    options.mode = Mode::kFixedAmplitude;
    options.fixed_amplitude = amplitude;
    return options;
  }
};

struct CandidateFit {
  int kappa;
  double u_hat;
  double residual;  // sum_k (r_k - u_hat s_k(kappa))^2
};

struct EstimationResult {
  // Estimated change time. Equals N when the no-change hypothesis wins.
  int k_hat = 0;
  double u_hat = 0.0;
  bool no_change = false;
  double no_change_residual = 0.0;  // set when include_no_change
  std::vector<CandidateFit> residuals;  // ascending kappa, fitted candidates
  std::vector<int> candidate_set;       // every candidate scanned
  std::vector<int> excluded;            // zero-signature candidates (LS mode)
};

// Least-squares change-time estimate. For each candidate kappa the free
// response C A^k x0 is removed and the step signature s(kappa) is fitted by
// least squares (or at a fixed amplitude); the candidate with the smallest
// residual wins, ties going to the smallest kappa.
//
// Throws ConfigError for an invalid candidate or mismatched x0, and
// EstimationError when every candidate is excluded.
EstimationResult EstimateChange(const MeasurementSeries& y,
                                const DiscreteLTISystem& sys,
                                const Eigen::VectorXd& x0,
                                const EstimatorOptions& options = {});

}  // namespace privacy_hcr

#endif  // PRIVACY_HCR_CHANGE_POINT_H_
