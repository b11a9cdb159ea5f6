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

#include "privacy_hcr/lti.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "privacy_hcr/errors.h"
#include "privacy_hcr/rng.h"

namespace privacy_hcr {
namespace {

template <typename Derived>
bool AllFinite(const Eigen::DenseBase<Derived>& m) {
  return m.allFinite();
}

}  // namespace

DiscreteLTISystem::DiscreteLTISystem(Eigen::MatrixXd A, Eigen::VectorXd B,
                                     Eigen::RowVectorXd C, double sigma2,
                                     double dt)
    : A_(std::move(A)),
      B_(std::move(B)),
      C_(std::move(C)),
      sigma2_(sigma2),
      dt_(dt) {
  const auto n = A_.rows();
  if (n < 1) throw ConfigError("state dimension must be at least 1");
  if (A_.cols() != n) {
    throw ConfigError("A must be square, got " + std::to_string(A_.rows()) +
                      "x" + std::to_string(A_.cols()));
  }
  if (B_.size() != n) {
    throw ConfigError("B must have " + std::to_string(n) + " entries, got " +
                      std::to_string(B_.size()));
  }
  if (C_.size() != n) {
    throw ConfigError("C must have " + std::to_string(n) + " entries, got " +
                      std::to_string(C_.size()));
  }
  if (!AllFinite(A_) || !AllFinite(B_) || !AllFinite(C_)) {
    throw ConfigError("system matrices must have finite entries");
  }
  if (!std::isfinite(sigma2_) || sigma2_ < 0.0) {
    throw ConfigError("noise variance sigma2 must be finite and >= 0");
  }
  if (!std::isfinite(dt_) || dt_ <= 0.0) {
    throw ConfigError("sample period dt must be finite and > 0");
  }
}

DiscreteLTISystem DiscreteLTISystem::Scalar(double a, double b, double c,
                                            double sigma2, double dt) {
  return DiscreteLTISystem(Eigen::MatrixXd::Constant(1, 1, a),
                           Eigen::VectorXd::Constant(1, b),
                           Eigen::RowVectorXd::Constant(1, c), sigma2, dt);
}

DiscreteLTISystem DiscreteLTISystem::WithSigma2(double sigma2) const {
  return DiscreteLTISystem(A_, B_, C_, sigma2, dt_);
}

DiscreteLTISystem DiscreteLTISystem::WithDt(double dt) const {
  return DiscreteLTISystem(A_, B_, C_, sigma2_, dt);
}

DiscreteLTISystem DiscreteLTISystem::WithC(Eigen::RowVectorXd C) const {
  return DiscreteLTISystem(A_, B_, std::move(C), sigma2_, dt_);
}

void StepScenario::Validate(int n) const {
  if (horizon < 1) throw ConfigError("horizon N must be at least 1");
  if (k_star < 0 || k_star >= horizon) {
    throw ConfigError("change time k* must satisfy 0 <= k* < N (k* = " +
                      std::to_string(k_star) +
                      ", N = " + std::to_string(horizon) + ")");
  }
  if (x0.size() != 0 && x0.size() != n) {
    throw ConfigError("initial state x0 must have " + std::to_string(n) +
                      " entries, got " + std::to_string(x0.size()));
  }
  if (!std::isfinite(amplitude)) throw ConfigError("amplitude must be finite");
}

Eigen::VectorXd StepScenario::InitialState(int n) const {
  return x0.size() == 0 ? Eigen::VectorXd::Zero(n) : x0;
}

std::complex<double> EigenStructure::MarkovParameter(int j) const {
  std::complex<double> sum = 0.0;
  for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
    sum += b_coeffs(i) * std::pow(lambdas(i), j) * cv(i);
  }
  return sum;
}

double MarkovParameter(const DiscreteLTISystem& sys, int j) {
  if (j < 0) throw DomainError("Markov parameter index must be >= 0");
  Eigen::VectorXd x = sys.B();
  for (int i = 0; i < j; ++i) x = sys.A() * x;
  return sys.C().dot(x);
}

std::vector<double> MarkovParameters(const DiscreteLTISystem& sys,
                                     int count) {
  std::vector<double> h(std::max(count, 0));
  Eigen::VectorXd x = sys.B();
  for (int j = 0; j < count; ++j) {
    h[j] = sys.C().dot(x);
    if (j + 1 < count) x = sys.A() * x;
  }
  return h;
}

std::vector<double> UnitStepResponse(const DiscreteLTISystem& sys,
                                     int count) {
  std::vector<double> g = MarkovParameters(sys, count);
  std::partial_sum(g.begin(), g.end(), g.begin());
  return g;
}

std::vector<double> FreeResponse(const DiscreteLTISystem& sys,
                                 const Eigen::VectorXd& x0, int horizon) {
  std::vector<double> y(horizon + 1, 0.0);
  if (x0.size() == 0 || x0.isZero(0.0)) return y;
  Eigen::VectorXd x = x0;
  for (int k = 0; k <= horizon; ++k) {
    y[k] = sys.C().dot(x);
    if (k < horizon) x = sys.A() * x;
  }
  return y;
}

std::vector<double> StepSignature(const DiscreteLTISystem& sys, int kappa,
                                  int horizon) {
  if (kappa < 0 || kappa >= horizon) {
    throw DomainError("candidate change time must satisfy 0 <= kappa < N");
  }
  const std::vector<double> g = UnitStepResponse(sys, horizon - kappa);
  std::vector<double> s(horizon + 1, 0.0);
  std::copy(g.begin(), g.end(), s.begin() + kappa + 1);
  return s;
}

MeasurementSeries SimulateNoiseless(const DiscreteLTISystem& sys,
                                    const StepScenario& scenario) {
  scenario.Validate(sys.n());
  MeasurementSeries out;
  out.values = FreeResponse(sys, scenario.InitialState(sys.n()),
                            scenario.horizon);
  if (scenario.amplitude != 0.0) {
    const std::vector<double> s =
        StepSignature(sys, scenario.k_star, scenario.horizon);
    for (std::size_t k = 0; k < s.size(); ++k) {
      out.values[k] += scenario.amplitude * s[k];
    }
  }
  return out;
}

MeasurementSeries SimulateNoisy(const DiscreteLTISystem& sys,
                                const StepScenario& scenario,
                                std::uint64_t seed) {
  if (sys.sigma2() == 0.0) {
    throw DomainError(
        "noise variance must be positive for a noisy simulation");
  }
  MeasurementSeries out = SimulateNoiseless(sys, scenario);
  Engine engine = MakeEngine(seed);
  const double sigma = std::sqrt(sys.sigma2());
  for (double& y : out.values) y += sigma * StandardNormal(engine);
  out.noisy = true;
  out.seed = seed;
  return out;
}

DiscreteLTISystem ZohDiscretize(double f, double h, double c, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw DomainError("sample period dt must be > 0");
  }
  const double a = std::exp(-f * dt);
  // (1 - e^{-f dt}) / f without cancellation for small f dt.
  const double b = f == 0.0 ? h * dt : -h * std::expm1(-f * dt) / f;
  return DiscreteLTISystem::Scalar(a, b, c, 0.0, dt);
}

EigenStructure ComputeEigenStructure(const DiscreteLTISystem& sys,
                                     double max_condition) {
  const int n = sys.n();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(sys.A(), true);
  if (solver.info() != Eigen::Success) {
    throw DomainError("eigenvalue decomposition of A did not converge");
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const Eigen::VectorXcd raw_lambdas = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return std::abs(raw_lambdas(i)) > std::abs(raw_lambdas(j));
  });

  EigenStructure es;
  es.lambdas.resize(n);
  es.V.resize(n, n);
  const Eigen::MatrixXcd raw_vectors = solver.eigenvectors();
  for (int i = 0; i < n; ++i) {
    es.lambdas(i) = raw_lambdas(order[i]);
    es.V.col(i) = raw_vectors.col(order[i]);
  }

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(es.V);
  const auto& sv = svd.singularValues();
  const double smallest = sv(sv.size() - 1);
  es.condition_number =
      smallest > 0.0 ? sv(0) / smallest : std::numeric_limits<double>::infinity();
  if (!(es.condition_number <= max_condition)) {
    throw DomainError(
        "A is not diagonalizable to working precision (eigenvector condition "
        "number " + std::to_string(es.condition_number) + ")");
  }

  const Eigen::VectorXcd B = sys.B().cast<std::complex<double>>();
  es.b_coeffs = es.V.partialPivLu().solve(B);
  es.cv = sys.C().cast<std::complex<double>>() * es.V;

  const double scale = std::max(sys.A().norm(), 1.0);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXcd v = es.V.col(i);
    const double residual =
        (sys.A().cast<std::complex<double>>() * v - es.lambdas(i) * v).norm();
    if (residual > 1e-8 * scale * v.norm()) {
      throw DomainError("eigenpair residual exceeds tolerance");
    }
  }
  const double b_error = (es.V * es.b_coeffs - B).norm();
  if (b_error > 1e-8 * std::max(B.norm(), 1.0)) {
    throw DomainError("modal coordinates of B do not reconstruct B");
  }
  return es;
}

}  // namespace privacy_hcr
