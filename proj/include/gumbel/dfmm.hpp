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


#ifndef GUMBEL_DFMM_HPP
#define GUMBEL_DFMM_HPP

#include <Eigen/Core>
#include <array>
#include <optional>
#include <ostream>

#include "gumbel/log_real.hpp"
#include "gumbel/tails.hpp"

namespace gumbel {

struct DfmmConfig {
  TypeI tail;
  double beta = 0.1;
  /// First generation of the sum; defaults to the first k where u_n(k) is defined.
  std::optional<long long> x0;
  long long t = 1000;
  /// Verify the concavity sign pattern over the grid.
  bool check_signs = true;
};

void validate(const DfmmConfig& cfg);

/// First integer k ≥ 1 with u_n(k) defined.
long long default_x0(const TypeI& tail);

/// h(k, t) = (t - k) log((1-β) u_n(k)).
LogReal log_family_size(long long k, long long t, const DfmmConfig& cfg);

/// h and its first four x-derivatives at real x, from Taylor jets.
std::array<double, 5> h_derivatives(const DfmmConfig& cfg, double x);

/// ∂h/∂x from its closed form in terms of L_1 and Ω_1.
double dh_dx(const DfmmConfig& cfg, double x);

struct SaddlePoint {
  double x_c = 0.0;
  double kappa = 0.0;
  double d = 0.0;
  double x_c_asymptotic = 0.0;
  /// log^{(n)} t Π_{k=1}^{n} log^{(k)} t / (α t).
  double kappa_asymptotic = 0.0;
  /// log^{(n)} t / (α x_c) with the numerical x_c.
  double kappa_asymptotic_xc = 0.0;
  double d_asymptotic = 0.0;
  double dh_at_x_c = 0.0;
  int iterations = 0;
};

/// Maximizer of h(·, t) on [x0, t]; throws std::runtime_error when h has
/// no interior maximum.
SaddlePoint saddle(const DfmmConfig& cfg);

struct SignCheck {
  /// First k from which Δ²h < 0, Δ³h > 0 and Δ⁴h < 0 hold up to the end.
  long long first_valid_k = 0;
  long long violations = 0;
  bool holds_past_x_c = true;
};

/// Forward differences Δ^m h(k), m = 2, 3, 4.
std::array<double, 3> h_differences(const DfmmConfig& cfg, long long k);

SignCheck check_signs(const DfmmConfig& cfg, double x_c);

struct WaveProfile {
  long long t = 0;
  long long x0 = 0;
  /// u_n(k) for k = x0..t, increasing.
  Eigen::ArrayXd f;
  /// log N_k^D(t).
  Eigen::ArrayXd log_weight;
  /// Cumulative Φ(f_k, t).
  Eigen::ArrayXd Phi;
  double S = 0.0;
  double sigma = 0.0;
  double logX = 0.0;
  SaddlePoint saddle;
  std::optional<SignCheck> signs;

  /// Right-continuous step evaluation of Φ(f, t).
  double cdf(double x) const;
};

WaveProfile wave_profile(const DfmmConfig& cfg);

/// Rows (f, Φ) at jump points of Φ.
void write_wave_csv(std::ostream& out, const Eigen::ArrayXd& f, const Eigen::ArrayXd& Phi);

}  // namespace gumbel

#endif  // GUMBEL_DFMM_HPP
