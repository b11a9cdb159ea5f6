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

#ifndef PRIVACY_HCR_LTI_H_
#define PRIVACY_HCR_LTI_H_

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace privacy_hcr {

// Single-input single-output discrete-time plant
//
//   x_{k+1} = A x_k + B u_k
//   y_k     = C x_k + e_k,   e_k ~ N(0, sigma2) i.i.d.
//
// sampled every dt minutes. Instances are validated on construction and
// immutable afterwards.
class DiscreteLTISystem {
 public:
  // Throws ConfigError on inconsistent dimensions, non-finite entries,
  // negative sigma2 or non-positive dt.
  DiscreteLTISystem(Eigen::MatrixXd A, Eigen::VectorXd B, Eigen::RowVectorXd C,
                    double sigma2, double dt = 1.0);

  // One-state system with x_{k+1} = a x_k + b u_k, y_k = c x_k + e_k.
  static DiscreteLTISystem Scalar(double a, double b, double c, double sigma2,
                                  double dt = 1.0);

  int n() const { return static_cast<int>(A_.rows()); }
  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::VectorXd& B() const { return B_; }
  const Eigen::RowVectorXd& C() const { return C_; }
  double sigma2() const { return sigma2_; }
  double dt() const { return dt_; }

  DiscreteLTISystem WithSigma2(double sigma2) const;
  DiscreteLTISystem WithDt(double dt) const;
  DiscreteLTISystem WithC(Eigen::RowVectorXd C) const;

 private:
  Eigen::MatrixXd A_;
  Eigen::VectorXd B_;
  Eigen::RowVectorXd C_;
  double sigma2_;
  double dt_;
};

// A step of the given amplitude applied from input index k_star onwards:
// u_k = 0 for k < k_star and u_k = amplitude for k >= k_star. Measurements
// run over k = 0..horizon, so the first affected output is y_{k_star + 1}.
struct StepScenario {
  int k_star = 0;
  int horizon = 1;
  Eigen::VectorXd x0;  // empty means the zero state
  double amplitude = 1.0;

  // Throws ConfigError unless 0 <= k_star < horizon and x0 is empty or has
  // dimension n.
  void Validate(int n) const;
  Eigen::VectorXd InitialState(int n) const;
};

// Output samples y_0..y_N.
struct MeasurementSeries {
  std::vector<double> values;
  bool noisy = false;
  std::optional<std::uint64_t> seed;

  int horizon() const { return static_cast<int>(values.size()) - 1; }
};

// Modal decomposition of a diagonalizable A:
//   A v_i = lambda_i v_i,  B = sum_i b_i v_i,  cv_i = C v_i,
// with |lambda_i| non-increasing in i.
struct EigenStructure {
  Eigen::VectorXcd lambdas;
  Eigen::MatrixXcd V;
  Eigen::VectorXcd b_coeffs;
  Eigen::VectorXcd cv;
  double condition_number = 1.0;

  // sum_i b_i lambda_i^j cv_i, the modal form of C A^j B.
  std::complex<double> MarkovParameter(int j) const;
};

inline constexpr double kDefaultMaxEigenvectorCondition = 1e12;

// C A^j B by iterated matrix-vector products.
double MarkovParameter(const DiscreteLTISystem& sys, int j);

// h_0..h_{count-1} with h_j = C A^j B.
std::vector<double> MarkovParameters(const DiscreteLTISystem& sys, int count);

// Running sums g_j = h_0 + ... + h_j, j = 0..count-1: the output deviation
// j + 1 samples after a unit step is applied.
std::vector<double> UnitStepResponse(const DiscreteLTISystem& sys, int count);

// Output of the unforced system, C A^k x0 for k = 0..horizon.
std::vector<double> FreeResponse(const DiscreteLTISystem& sys,
                                 const Eigen::VectorXd& x0, int horizon);

// Unit step response deviation for a change at input index kappa:
// s_k = 0 for k <= kappa, s_k = sum_{l=kappa}^{k-1} C A^{k-1-l} B otherwise.
// Length horizon + 1. Throws DomainError unless 0 <= kappa < horizon.
std::vector<double> StepSignature(const DiscreteLTISystem& sys, int kappa,
                                  int horizon);

MeasurementSeries SimulateNoiseless(const DiscreteLTISystem& sys,
                                    const StepScenario& scenario);

// Noiseless response plus i.i.d. N(0, sigma2) draws from a generator seeded
// with `seed`. Throws DomainError if sigma2 == 0.
MeasurementSeries SimulateNoisy(const DiscreteLTISystem& sys,
                                const StepScenario& scenario,
                                std::uint64_t seed);

// Zero-order-hold sampling of dx/dt = -f x + h u, y = c x with period dt:
// a = exp(-f dt), b = (h / f)(1 - exp(-f dt)) (b = h dt when f == 0).
// sigma2 of the result is 0.
DiscreteLTISystem ZohDiscretize(double f, double h, double c, double dt);

// Throws DomainError when the eigenvector matrix is singular or its
// condition number exceeds `max_condition`.
EigenStructure ComputeEigenStructure(
    const DiscreteLTISystem& sys,
    double max_condition = kDefaultMaxEigenvectorCondition);

}  // namespace privacy_hcr

#endif  // PRIVACY_HCR_LTI_H_
