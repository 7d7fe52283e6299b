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

#ifndef GUMBEL_LOG_REAL_HPP
#define GUMBEL_LOG_REAL_HPP

#include <cmath>
#include <compare>
#include <limits>
#include <stdexcept>

namespace gumbel {

/// Nonnegative extended real stored as its natural logarithm.
///
/// Population sizes in these models grow like exp(t log t), so the linear
/// value overflows a double after a few hundred generations. Zero is the
/// distinguished value log = -inf; +inf is permitted and absorbing.
class LogReal {
 public:
  constexpr LogReal() = default;

  static constexpr LogReal zero() { return LogReal{}; }
  static constexpr LogReal one() { return from_log(0.0); }
  static constexpr LogReal from_log(double log_value) {
    LogReal r;
    r.log_ = log_value;
    return r;
  }
  static LogReal from_linear(double value) {
    if (!(value >= 0.0)) {
      throw std::domain_error("LogReal: negative or NaN value");
    }
    return from_log(std::log(value));
  }

  constexpr double log() const { return log_; }
  double linear() const { return std::exp(log_); }
  constexpr bool is_zero() const {
    return log_ == -std::numeric_limits<double>::infinity();
  }

  LogReal& operator+=(LogReal other) {
    *this = *this + other;
    return *this;
  }
  LogReal& operator*=(LogReal other) {
    log_ += other.log_;
    return *this;
  }

  friend LogReal operator+(LogReal a, LogReal b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const double hi = std::max(a.log_, b.log_);
    const double lo = std::min(a.log_, b.log_);
    if (hi == std::numeric_limits<double>::infinity()) return a.log_ > b.log_ ? a : b;
    return from_log(hi + std::log1p(std::exp(lo - hi)));
  }
  friend LogReal operator*(LogReal a, LogReal b) {
    if (a.is_zero() || b.is_zero()) return zero();
    return from_log(a.log_ + b.log_);
  }
  friend LogReal operator/(LogReal a, LogReal b) {
    if (b.is_zero()) throw std::domain_error("LogReal: division by zero");
    if (a.is_zero()) return zero();
    return from_log(a.log_ - b.log_);
  }
  /// Raises to a real power; 0^p = 0 for p > 0.
  friend LogReal pow(LogReal a, double p) {
    if (a.is_zero()) return p > 0.0 ? zero() : one();
    return from_log(a.log_ * p);
  }

  friend constexpr auto operator<=>(LogReal a, LogReal b) { return a.log_ <=> b.log_; }
  friend constexpr bool operator==(LogReal a, LogReal b) { return a.log_ == b.log_; }

 private:
  double log_ = -std::numeric_limits<double>::infinity();
};

}  // namespace gumbel

#endif  // GUMBEL_LOG_REAL_HPP
