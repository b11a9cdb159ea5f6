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

#ifndef PRIVACY_HCR_HCR_BOUND_H_
#define PRIVACY_HCR_HCR_BOUND_H_

#include <vector>

#include "privacy_hcr/lti.h"

namespace privacy_hcr {

// Bias g(k) of an estimator of the change time, for k = 0..N.
class BiasFunction {
 public:
  explicit BiasFunction(std::vector<double> values);
  static BiasFunction Zero(int horizon);

  // Largest k for which g(k) is defined.
  int horizon() const { return static_cast<int>(values_.size()) - 1; }
  double operator()(int k) const { return values_.at(k); }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

struct SPoint {
  int tau;
  double s;
};

// Variance lower bound for change-time estimators at a given (k*, N).
//
// bound_steps2 is +infinity when some shift tau leaves the output
// distribution unchanged (S(tau) == 0) while moving the estimator mean; no
// estimator can then distinguish k* from k* + tau.
struct BoundReport {
  int k_star = 0;
  int horizon = 0;
  std::vector<SPoint> s_profile;  // tau = 1..N-k*
  int tau_star = 0;               // 0 when every quotient was 0/0
  double bound_steps2 = 0.0;
  double bound_phys = 0.0;        // min^2
  bool overflow_mode = false;     // some quotient was evaluated as exp(2 ln q - S)

  bool perfect_privacy() const;
  double s_at_tau_star() const;
};

// Above this S the denominator e^S - 1 is not formed explicitly.
inline constexpr double kLogDomainThreshold = 700.0;

// S(tau) = (1/sigma2) sum_{k=k*+1}^{N} (sum_{l=k*}^{min(k*+tau-1, k-1)}
// C A^{k-1-l} B)^2, the scaled squared distance between the noiseless
// responses to steps at k* and k* + tau.
// Throws DomainError for sigma2 == 0, k* outside [0, N) or tau outside
// [1, N - k*].
double STau(const DiscreteLTISystem& sys, int k_star, int horizon, int tau);

// S(tau) for every tau = 1..N-k*, in O(N^2).
std::vector<SPoint> SProfile(const DiscreteLTISystem& sys, int k_star,
                             int horizon);

// Counterpart of STau for a backward shift: the distance between steps at
// k* - shift and k*, summed over k = k*-shift+1..N. Requires shift >= 1 and
// k* - shift >= 0.
double SMinus(const DiscreteLTISystem& sys, int k_star, int horizon,
              int shift);

// max over tau of (tau + g(k*+tau) - g(k*))^2 / (e^{S(tau)} - 1).
// Ties resolve to the smallest tau. g must cover 0..N; shorter bias
// functions are rejected with ConfigError.
BoundReport HcrBound(const DiscreteLTISystem& sys, int k_star, int horizon,
                     const BiasFunction& bias);
BoundReport HcrBound(const DiscreteLTISystem& sys, int k_star, int horizon);

// Unbiased one-state bound 1 / (e^S - 1) with
// S = (1/sigma2) sum_{k=k*+1}^{N} (c a^{k-1-k*} b)^2. Requires a >= 0.
// The report carries S in a single tau = 1 profile entry.
BoundReport ScalarBound(double a, double b, double c, double sigma2,
                        int k_star, int horizon, double dt = 1.0);

// STau evaluated through the modal decomposition in complex arithmetic.
// Throws DomainError if the result has an imaginary residue above 1e-9
// relative to its magnitude.
double STauEigen(const EigenStructure& es, double sigma2, int k_star,
                 int horizon, int tau);

// Converts a bound in steps^2 to minutes^2.
double UnitConvert(double bound_steps2, double dt);

enum class QuotientMethod { kAuto, kDirect, kLogDomain };

// numerator_root^2 / (e^s - 1) for s > 0. kAuto switches to the log domain
// above kLogDomainThreshold; `used_log_domain` reports which branch ran.
double HcrQuotient(double numerator_root, double s, QuotientMethod method,
                   bool* used_log_domain = nullptr);

}  // namespace privacy_hcr

#endif  // PRIVACY_HCR_HCR_BOUND_H_
