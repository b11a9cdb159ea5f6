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

#include "privacy_hcr/hcr_bound.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <utility>

#include "privacy_hcr/errors.h"

namespace privacy_hcr {
namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

void CheckBoundInputs(double sigma2, int k_star, int horizon) {
  if (!(sigma2 > 0.0)) {
    throw DomainError(
        "noise variance must be positive: the bound is undefined for "
        "noiseless measurements");
  }
  if (k_star < 0 || k_star >= horizon) {
    throw DomainError("change time must satisfy 0 <= k* < N (k* = " +
                      std::to_string(k_star) +
                      ", N = " + std::to_string(horizon) + ")");
  }
}

void CheckTau(int k_star, int horizon, int tau) {
  if (tau < 1 || tau > horizon - k_star) {
    throw DomainError("shift tau = " + std::to_string(tau) +
                      " outside [1, N - k*] = [1, " +
                      std::to_string(horizon - k_star) + "]");
  }
}

// Inner sums w_j = sum_{m=max(0, j-tau+1)}^{j} h_m for j = 0..h.size()-1,
// grown one tau at a time. Each step adds h_{j-tau+1}, so the summation order
// matches l = k*..k*+tau-1 in the defining double sum.
template <typename T>
class WindowSums {
 public:
  explicit WindowSums(std::vector<T> h)
      : h_(std::move(h)), w_(h_.size(), T{0}) {}

  void Grow() {
    ++tau_;
    for (std::size_t j = tau_ - 1; j < w_.size(); ++j) {
      w_[j] += h_[j - (tau_ - 1)];
    }
  }

  const std::vector<T>& sums() const { return w_; }

 private:
  std::vector<T> h_;
  std::vector<T> w_;
  std::size_t tau_ = 0;
};

double SumOfSquares(const std::vector<double>& w) {
  double acc = 0.0;
  for (double v : w) acc += v * v;
  return acc;
}

}  // namespace

BiasFunction::BiasFunction(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) throw ConfigError("bias function must be non-empty");
  for (double v : values_) {
    if (!std::isfinite(v)) throw ConfigError("bias values must be finite");
  }
}

BiasFunction BiasFunction::Zero(int horizon) {
  return BiasFunction(std::vector<double>(std::max(horizon, 0) + 1, 0.0));
}

bool BoundReport::perfect_privacy() const { return std::isinf(bound_steps2); }

double BoundReport::s_at_tau_star() const {
  for (const SPoint& p : s_profile) {
    if (p.tau == tau_star) return p.s;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double STau(const DiscreteLTISystem& sys, int k_star, int horizon, int tau) {
  CheckBoundInputs(sys.sigma2(), k_star, horizon);
  CheckTau(k_star, horizon, tau);
  WindowSums<double> windows(MarkovParameters(sys, horizon - k_star));
  for (int t = 0; t < tau; ++t) windows.Grow();
  return SumOfSquares(windows.sums()) / sys.sigma2();
}

std::vector<SPoint> SProfile(const DiscreteLTISystem& sys, int k_star,
                             int horizon) {
  CheckBoundInputs(sys.sigma2(), k_star, horizon);
  const int taus = horizon - k_star;
  WindowSums<double> windows(MarkovParameters(sys, taus));
  std::vector<SPoint> profile;
  profile.reserve(taus);
  for (int tau = 1; tau <= taus; ++tau) {
    windows.Grow();
    profile.push_back({tau, SumOfSquares(windows.sums()) / sys.sigma2()});
  }
  return profile;
}

double SMinus(const DiscreteLTISystem& sys, int k_star, int horizon,
              int shift) {
  CheckBoundInputs(sys.sigma2(), k_star, horizon);
  if (shift < 1) throw DomainError("backward shift must be >= 1");
  if (k_star - shift < 0) {
    throw DomainError("backward shift " + std::to_string(shift) +
                      " moves the change before time 0 (k* = " +
                      std::to_string(k_star) + ")");
  }
  // The outer sum starts at k* - shift + 1 and the inner sum spans
  // l = k*-shift..min(k*-1, k-1): a forward shift anchored at k* - shift.
  const int start = k_star - shift;
  WindowSums<double> windows(MarkovParameters(sys, horizon - start));
  for (int t = 0; t < shift; ++t) windows.Grow();
  return SumOfSquares(windows.sums()) / sys.sigma2();
}

double HcrQuotient(double numerator_root, double s, QuotientMethod method,
                   bool* used_log_domain) {
  const bool log_domain =
      method == QuotientMethod::kLogDomain ||
      (method == QuotientMethod::kAuto && s > kLogDomainThreshold);
  if (used_log_domain != nullptr) *used_log_domain = log_domain;
  const double root = std::abs(numerator_root);
  if (root == 0.0) return 0.0;
  if (!log_domain) return root * root / std::expm1(s);
  // ln(e^s - 1) = s + ln(1 - e^{-s}).
  return std::exp(2.0 * std::log(root) - s - std::log1p(-std::exp(-s)));
}

BoundReport HcrBound(const DiscreteLTISystem& sys, int k_star, int horizon,
                     const BiasFunction& bias) {
  CheckBoundInputs(sys.sigma2(), k_star, horizon);
  if (bias.horizon() < horizon) {
    throw ConfigError("bias function covers k = 0.." +
                      std::to_string(bias.horizon()) +
                      " but the bound needs k = 0.." + std::to_string(horizon));
  }

  BoundReport report;
  report.k_star = k_star;
  report.horizon = horizon;
  report.s_profile = SProfile(sys, k_star, horizon);

  bool have_value = false;
  for (const SPoint& p : report.s_profile) {
    const double root = p.tau + bias(k_star + p.tau) - bias(k_star);
    double q;
    if (p.s == 0.0) {
      if (root == 0.0) continue;  // 0/0 carries no information
      q = kInfinity;
    } else {
      bool log_domain = false;
      q = HcrQuotient(root, p.s, QuotientMethod::kAuto, &log_domain);
      report.overflow_mode = report.overflow_mode || log_domain;
    }
    if (!have_value || q > report.bound_steps2) {
      report.bound_steps2 = q;
      report.tau_star = p.tau;
      have_value = true;
    }
  }
  report.bound_phys = UnitConvert(report.bound_steps2, sys.dt());
  return report;
}

BoundReport HcrBound(const DiscreteLTISystem& sys, int k_star, int horizon) {
  return HcrBound(sys, k_star, horizon, BiasFunction::Zero(horizon));
}

BoundReport ScalarBound(double a, double b, double c, double sigma2,
                        int k_star, int horizon, double dt) {
  if (!(a >= 0.0) || !std::isfinite(a)) {
    throw DomainError("one-state bound requires a finite pole a >= 0");
  }
  if (!std::isfinite(b) || !std::isfinite(c)) {
    throw ConfigError("b and c must be finite");
  }
  CheckBoundInputs(sigma2, k_star, horizon);

  double s = 0.0;
  double term = c * b;  // c a^j b
  for (int j = 0; j < horizon - k_star; ++j) {
    s += term * term;
    term *= a;
  }
  s /= sigma2;

  BoundReport report;
  report.k_star = k_star;
  report.horizon = horizon;
  report.s_profile = {{1, s}};
  report.tau_star = 1;
  if (s == 0.0) {
    report.bound_steps2 = kInfinity;
  } else {
    report.bound_steps2 =
        HcrQuotient(1.0, s, QuotientMethod::kAuto, &report.overflow_mode);
  }
  report.bound_phys = UnitConvert(report.bound_steps2, dt);
  return report;
}

double STauEigen(const EigenStructure& es, double sigma2, int k_star,
                 int horizon, int tau) {
  CheckBoundInputs(sigma2, k_star, horizon);
  CheckTau(k_star, horizon, tau);
  const int count = horizon - k_star;
  const Eigen::Index n = es.lambdas.size();

  // Modal Markov parameters sum_i lambda_i^j b_i C v_i, powers by iteration.
  std::vector<std::complex<double>> h(count);
  Eigen::VectorXcd weights = es.b_coeffs.cwiseProduct(es.cv);
  for (int j = 0; j < count; ++j) {
    h[j] = weights.sum();
    for (Eigen::Index i = 0; i < n; ++i) weights(i) *= es.lambdas(i);
  }

  WindowSums<std::complex<double>> windows(std::move(h));
  for (int t = 0; t < tau; ++t) windows.Grow();

  double real_part = 0.0;
  double scale = 0.0;
  double imag_part = 0.0;
  for (const std::complex<double>& w : windows.sums()) {
    const std::complex<double> sq = w * w;
    real_part += sq.real();
    imag_part += sq.imag();
    scale += std::norm(w);
  }
  if (std::abs(imag_part) > 1e-9 * std::max(scale, 1.0)) {
    throw DomainError("modal evaluation left an imaginary residue of " +
                      std::to_string(imag_part));
  }
  return real_part / sigma2;
}

double UnitConvert(double bound_steps2, double dt) {
  if (!(dt > 0.0)) throw DomainError("sample period dt must be > 0");
  return bound_steps2 * (dt * dt);
}

}  // namespace privacy_hcr
