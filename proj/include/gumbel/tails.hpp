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


#ifndef GUMBEL_TAILS_HPP
#define GUMBEL_TAILS_HPP

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gumbel/numeric.hpp"
#include "gumbel/random.hpp"

namespace gumbel {

/// L(x) = Π_k (log^{(k)} x)^{γ_k}. An empty factor list means L ≡ 1.
struct SlowlyVarying {
  std::vector<std::pair<int, double>> factors;  // (k, γ_k), k distinct, k ≥ 1

  bool trivial() const { return factors.empty(); }
  int max_order() const;
  /// Smallest x with every log^{(k)} x > 0 (exclusive bound).
  double domain_bound() const;
  std::optional<double> try_log_value(double x) const;
  /// log L(x); throws DomainError outside the domain.
  double log_value(double x) const;
  double value(double x) const { return std::exp(log_value(x)); }

  /// log L(z) given log z, for any scalar type supporting log().
  template <typename T>
  T log_value_from_log(const T& log_z) const {
    using std::log;
    T acc = log_z * 0.0;
    for (const auto& [k, gamma] : factors) {
      T lk = log_z;
      for (int j = 1; j < k; ++j) lk = log(lk);
      acc = acc + gamma * log(lk);
    }
    return acc;
  }

  friend bool operator==(const SlowlyVarying&, const SlowlyVarying&) = default;
};

struct TypeI {
  int n = 1;
  double alpha = 1.0;
  SlowlyVarying L;
  friend bool operator==(const TypeI&, const TypeI&) = default;
};

struct TypeII {
  int n = 1;
  double alpha = 1.0;
  SlowlyVarying L;
  friend bool operator==(const TypeII&, const TypeII&) = default;
};

/// Grid f_i = (c i)^{1/α}, i ≥ 1, with P(F = f_i) = e^{-c i}(e^c - 1).
struct DiscreteStretched {
  double alpha = 1.0;
  double c = 1.0;

  double grid_point(long long i) const { return std::pow(c * static_cast<double>(i), 1.0 / alpha); }
  double log_grid_point(long long i) const { return std::log(c * static_cast<double>(i)) / alpha; }
  /// log P(F = f_i).
  double log_mass(long long i) const { return -c * static_cast<double>(i - 1) + std::log1p(-std::exp(-c)); }
  /// Number of grid points f_i ≤ x.
  long long index_at(double x) const;

  friend bool operator==(const DiscreteStretched&, const DiscreteStretched&) = default;
};

using TailSpec = std::variant<TypeI, TypeII, DiscreteStretched>;

/// Throws std::invalid_argument when parameters violate the type invariants.
void validate(const TailSpec& spec);

/// Left end of the region where the closed form is used; G = 1 below it.
double support_min(const TailSpec& spec);

/// log G(x), nonincreasing, 0 below the support minimum.
double log_tail(const TailSpec& spec, double x);

/// inf{x : log G(x) ≤ log_p}, clamped to the support minimum.
double tail_quantile_log(const TailSpec& spec, double log_p);
double tail_quantile(const TailSpec& spec, double p);

double sample_fitness(const TailSpec& spec, Rng& rng);

/// g_I(x) = x^α L(x), evaluated in log space.
double log_g_one(double alpha, const SlowlyVarying& L, double x);

/// log u_n(t) as a generic expression; used with Taylor jets by dfmm.
template <typename T>
T log_u_n_expr(const TypeI& s, const T& t) {
  using std::log;
  T y = t;
  for (int j = 1; j < s.n; ++j) y = log(y);
  const T log_y = log(y);
  const T log_z = log_y / s.alpha;
  T r = log_z - s.L.log_value_from_log(log_z) / s.alpha;
  if (s.n == 1) r = r + log(log_y / s.alpha) / s.alpha;
  return r;
}

/// log u_n(t); empty when some iterated log in the formula is not positive.
std::optional<double> try_log_u_n(const TypeI& s, double t);
std::optional<double> try_u_n(const TypeI& s, double t);
double u_n(const TypeI& s, double t);
double v_n(const TypeI& s, double t);
double s_n(const TypeI& s, double t);

/// Rate exponents for the type II predictors with ε = 0.
struct TypeIIExponents {
  double nu;
  double a;
};
TypeIIExponents type2_exponents(int n, double alpha);

/// log χ(t, n, ν).
double log_chi(double t, int n, double nu);
/// log U(t, n, ν, a).
double log_U(double t, int n, double nu, double a);
/// 𝒢(x, n, a) = log x (log^{(n)} x)^a.
double script_G(double x, int n, double a);

struct GrowthPrediction {
  double t = 0.0;
  std::optional<double> u;
  std::optional<double> log_u;
  std::optional<double> v;
  std::optional<double> s;
  /// Normalizer of the growth statistic (t log^{(n)} t for type I).
  double logX_scale = 0.0;
  /// Limit of the normalized growth statistic.
  double exponent_target = 0.0;
  /// Limit of the normalized W statistic (1 for W/u_n under type I).
  double w_exponent_target = 1.0;
  /// Type II only: log log X and log log W at ε = 0.
  std::optional<double> log_log_X;
  std::optional<double> log_log_W;
};

GrowthPrediction predict(const TailSpec& spec, double t);

std::string variant_name(const TailSpec& spec);

/// Key/value serialization of a tail spec (the [tail] section body).
std::map<std::string, std::string> tail_to_keys(const TailSpec& spec);
TailSpec tail_from_keys(const std::map<std::string, std::string>& keys);

}  // namespace gumbel

#endif  // GUMBEL_TAILS_HPP
