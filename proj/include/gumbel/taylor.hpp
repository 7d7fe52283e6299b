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


#ifndef GUMBEL_TAYLOR_HPP
#define GUMBEL_TAYLOR_HPP

#include <Eigen/Core>
#include <cmath>

namespace gumbel {

/// Truncated Taylor series in one variable, used for exact higher
/// derivatives of closed-form expressions.
///
/// coeffs()[j] holds f^{(j)}(x0) / j!.
template <typename Scalar, int Order>
class Taylor {
 public:
  using Coeffs = Eigen::Array<Scalar, Order + 1, 1>;

  Taylor() : c_(Coeffs::Zero()) {}
  explicit Taylor(const Coeffs& c) : c_(c) {}

  static Taylor constant(Scalar v) {
    Taylor r;
    r.c_(0) = v;
    return r;
  }
  static Taylor variable(Scalar x0) {
    Taylor r;
    r.c_(0) = x0;
    if constexpr (Order >= 1) r.c_(1) = Scalar(1);
    return r;
  }

  const Coeffs& coeffs() const { return c_; }
  Scalar value() const { return c_(0); }

  /// j-th derivative at the expansion point.
  Scalar derivative(int j) const {
    Scalar fact(1);
    for (int i = 2; i <= j; ++i) fact *= Scalar(i);
    return c_(j) * fact;
  }

  friend Taylor operator+(const Taylor& a, const Taylor& b) { return Taylor(a.c_ + b.c_); }
  friend Taylor operator-(const Taylor& a, const Taylor& b) { return Taylor(a.c_ - b.c_); }
  friend Taylor operator-(const Taylor& a) { return Taylor(-a.c_); }
  friend Taylor operator+(const Taylor& a, Scalar s) {
    Taylor r = a;
    r.c_(0) += s;
    return r;
  }
  friend Taylor operator+(Scalar s, const Taylor& a) { return a + s; }
  friend Taylor operator-(const Taylor& a, Scalar s) { return a + (-s); }
  friend Taylor operator-(Scalar s, const Taylor& a) { return (-a) + s; }
  friend Taylor operator*(const Taylor& a, Scalar s) { return Taylor(a.c_ * s); }
  friend Taylor operator*(Scalar s, const Taylor& a) { return Taylor(a.c_ * s); }
  friend Taylor operator/(const Taylor& a, Scalar s) { return Taylor(a.c_ / s); }

  friend Taylor operator*(const Taylor& a, const Taylor& b) {
    Taylor r;
    for (int k = 0; k <= Order; ++k) {
      Scalar s(0);
      for (int j = 0; j <= k; ++j) s += a.c_(j) * b.c_(k - j);
      r.c_(k) = s;
    }
    return r;
  }

  friend Taylor operator/(const Taylor& a, const Taylor& b) {
    Taylor r;
    for (int k = 0; k <= Order; ++k) {
      Scalar s = a.c_(k);
      for (int j = 1; j <= k; ++j) s -= b.c_(j) * r.c_(k - j);
      r.c_(k) = s / b.c_(0);
    }
    return r;
  }

  friend Taylor log(const Taylor& g) {
    using std::log;
    Taylor f;
    f.c_(0) = log(g.c_(0));
    for (int k = 1; k <= Order; ++k) {
      Scalar s = g.c_(k);
      for (int j = 1; j < k; ++j) s -= Scalar(j) / Scalar(k) * f.c_(j) * g.c_(k - j);
      f.c_(k) = s / g.c_(0);
    }
    return f;
  }

  friend Taylor exp(const Taylor& g) {
    using std::exp;
    Taylor f;
    f.c_(0) = exp(g.c_(0));
    for (int k = 1; k <= Order; ++k) {
      Scalar s(0);
      for (int j = 1; j <= k; ++j) s += Scalar(j) * g.c_(j) * f.c_(k - j);
      f.c_(k) = s / Scalar(k);
    }
    return f;
  }

  friend Taylor pow(const Taylor& g, Scalar a) { return exp(log(g) * a); }

 private:
  Coeffs c_;
};

}  // namespace gumbel

#endif  // GUMBEL_TAYLOR_HPP
