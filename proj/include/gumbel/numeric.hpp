// Copyright 2026 The gumbel-waves Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GUMBEL_NUMERIC_HPP
#define GUMBEL_NUMERIC_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

namespace gumbel {

/// Raised when a formula is evaluated outside the region where all of its
/// iterated logarithms are defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// log^{(k)} x, with log^{(0)} x = x. Empty when some intermediate value is
/// not positive.
inline std::optional<double> try_iterated_log(double x, int k) {
  for (int i = 0; i < k; ++i) {
    if (!(x > 0.0)) return std::nullopt;
    x = std::log(x);
  }
  return x;
}

inline double iterated_log(double x, int k) {
  auto r = try_iterated_log(x, k);
  if (!r) {
    throw DomainError("iterated log of order " + std::to_string(k) +
                      " undefined at x = " + std::to_string(x));
  }
  return *r;
}

/// exp^{(k)} y, the inverse of log^{(k)}. Overflows to +inf.
inline double iterated_exp(double y, int k) {
  for (int i = 0; i < k; ++i) y = std::exp(y);
  return y;
}

/// Π_{j=1}^{k} log^{(j)} x (empty product is 1).
inline double iterated_log_product(double x, int k) {
  double prod = 1.0;
  double y = x;
  for (int j = 1; j <= k; ++j) {
    y = std::log(y);
    prod *= y;
  }
  return prod;
}

/// Neumaier-compensated accumulator.
class KahanSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  KahanSum& operator+=(double v) {
    add(v);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// log Σ exp(values); -inf for an empty or all -inf input.
inline double log_sum_exp(std::span<const double> values) {
  double hi = -kInf;
  for (double v : values) hi = std::max(hi, v);
  if (hi == -kInf) return -kInf;
  if (hi == kInf) return kInf;
  KahanSum acc;
  for (double v : values) acc += std::exp(v - hi);
  return hi + std::log(acc.value());
}

inline double log_add_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

/// Standard normal CDF Υ(y).
inline double gaussian_cdf(double y) {
  return 0.5 * std::erfc(-y / std::numbers::sqrt2);
}

inline double gaussian_pdf(double y) {
  return std::exp(-0.5 * y * y) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace gumbel

#endif  // GUMBEL_NUMERIC_HPP
