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


#include "gumbel/tails.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gumbel/io.hpp"

namespace gumbel {

int SlowlyVarying::max_order() const {
  int k = 0;
  for (const auto& f : factors) k = std::max(k, f.first);
  return k;
}

double SlowlyVarying::domain_bound() const {
  const int k = max_order();
  return k == 0 ? 0.0 : iterated_exp(1.0, k - 1);
}

std::optional<double> SlowlyVarying::try_log_value(double x) const {
  double acc = 0.0;
  for (const auto& [k, gamma] : factors) {
    auto lk = try_iterated_log(x, k);
    if (!lk || !(*lk > 0.0)) return std::nullopt;
    acc += gamma * std::log(*lk);
  }
  return acc;
}

double SlowlyVarying::log_value(double x) const {
  auto r = try_log_value(x);
  if (!r) throw DomainError("slowly varying factor undefined at x = " + format_double(x));
  return *r;
}

long long DiscreteStretched::index_at(double x) const {
  if (!(x >= grid_point(1))) return 0;
  const double guess = std::pow(x, alpha) / c;
  long long i = guess >= 1e18 ? 1000000000000000000LL : std::max(1LL, static_cast<long long>(guess));
  while (i > 1 && grid_point(i) > x) --i;
  while (grid_point(i + 1) <= x) ++i;
  return i;
}

void validate(const TailSpec& spec) {
  auto check_L = [](const SlowlyVarying& L) {
    std::set<int> seen;
    for (const auto& [k, gamma] : L.factors) {
      if (k < 1) throw std::invalid_argument("slowly varying factor order must be >= 1");
      if (!seen.insert(k).second) throw std::invalid_argument("duplicate slowly varying order");
      if (!std::isfinite(gamma)) throw std::invalid_argument("slowly varying exponent must be finite");
    }
  };
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if (!(s.alpha > 0.0) || !std::isfinite(s.alpha)) throw std::invalid_argument("alpha must be positive");
        if constexpr (std::is_same_v<S, DiscreteStretched>) {
          if (!(s.c > 0.0) || !std::isfinite(s.c)) throw std::invalid_argument("c must be positive");
        } else {
          if (s.n < 1) throw std::invalid_argument("tail index n must be >= 1");
          check_L(s.L);
        }
      },
      spec);
}

namespace {

// Smallest double in (lo, hi] satisfying a monotone predicate, given
// pred(lo) false and pred(hi) true; both nonnegative.
template <typename Pred>
double bisect_doubles(double lo, double hi, Pred pred) {
  auto a = std::bit_cast<std::uint64_t>(lo);
  auto b = std::bit_cast<std::uint64_t>(hi);
  while (b - a > 1) {
    const std::uint64_t m = a + (b - a) / 2;
    if (pred(std::bit_cast<double>(m))) {
      b = m;
    } else {
      a = m;
    }
  }
  return std::bit_cast<double>(b);
}

// Left end of the region where x^α L(x) is defined and increasing.
double monotone_start(double alpha, const SlowlyVarying& L) {
  if (L.trivial()) return 0.0;
  const double bound = L.domain_bound();
  auto ok = [&](double x) {
    double drag = 0.0;
    double prod = 1.0;
    double y = x;
    for (int j = 1; j <= L.max_order(); ++j) {
      if (!(y > 0.0)) return false;
      y = std::log(y);
      if (!(y > 0.0)) return false;
      prod *= y;
      for (const auto& [k, gamma] : L.factors) {
        if (k == j && gamma < 0.0) drag += -gamma / prod;
      }
    }
    return drag < alpha;
  };
  double hi = std::max(2.0 * bound, bound + 1.0);
  while (!ok(hi)) {
    hi = hi < 1e3 ? hi * hi : hi * 1e3;
    if (!std::isfinite(hi)) throw DomainError("slowly varying factor never becomes monotone");
  }
  if (ok(bound)) return bound;
  return bisect_doubles(bound, hi, ok);
}

double type1_log_tail(const TypeI& s, double x) {
  if (x == 0.0) return -iterated_exp(-kInf, s.n);
  auto lL = s.L.try_log_value(x);
  if (!lL) return 0.0;
  return -iterated_exp(s.alpha * std::log(x) + *lL, s.n);
}

double type2_log_tail(const TypeII& s, double x) {
  const double lx = std::log(x);
  if (!(lx > 0.0)) return 0.0;
  auto z = try_iterated_log(lx, s.n - 1);
  if (!z || !(*z > 0.0)) return 0.0;
  auto lL = s.L.try_log_value(*z);
  if (!lL) return 0.0;
  return -std::exp(std::log(lx) + s.alpha * std::log(*z) + *lL);
}

template <typename S>
double closed_form_log_tail(const S& s, double x, double xmin) {
  if (x < xmin) return 0.0;
  if constexpr (std::is_same_v<S, TypeI>) {
    return type1_log_tail(s, x);
  } else {
    return type2_log_tail(s, x);
  }
}

template <typename LogTail>
double quantile_by_bisection(double xmin, double log_p, double seed, LogTail log_tail_fn) {
  auto pred = [&](double x) { return log_tail_fn(x) <= log_p; };
  if (pred(xmin)) return xmin;
  double lo = xmin;
  double hi;
  if (seed > xmin && std::isfinite(seed)) {
    double l = std::max(xmin, seed * (1.0 - 1e-9));
    double h = seed * (1.0 + 1e-9);
    if (!pred(l) && pred(h)) {
      return bisect_doubles(l, h, pred);
    }
  }
  hi = std::max({2.0 * xmin, xmin + 1.0, 1.0});
  while (!pred(hi)) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) return kInf;
  }
  return bisect_doubles(lo, hi, pred);
}

}  // namespace

double log_g_one(double alpha, const SlowlyVarying& L, double x) {
  if (x == 0.0) return -kInf;
  return alpha * std::log(x) + L.log_value(x);
}

double support_min(const TailSpec& spec) {
  return std::visit(
      [](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, DiscreteStretched>) {
          return s.grid_point(1);
        } else if constexpr (std::is_same_v<S, TypeI>) {
          return monotone_start(s.alpha, s.L);
        } else {
          return iterated_exp(monotone_start(s.alpha, s.L), s.n);
        }
      },
      spec);
}

double log_tail(const TailSpec& spec, double x) {
  if (std::isnan(x)) throw DomainError("log_tail: NaN argument");
  return std::visit(
      [x, &spec](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, DiscreteStretched>) {
          return -s.c * static_cast<double>(s.index_at(x));
        } else {
          return closed_form_log_tail(s, x, support_min(spec));
        }
      },
      spec);
}

double tail_quantile_log(const TailSpec& spec, double log_p) {
  if (std::isnan(log_p) || log_p > 0.0) {
    throw std::invalid_argument("tail_quantile: probability outside (0, 1]");
  }
  return std::visit(
      [log_p, &spec](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, DiscreteStretched>) {
          if (log_p == -kInf) return kInf;
          double guess = std::ceil(-log_p / s.c);
          long long i = guess >= 1e18 ? 1000000000000000000LL : std::max(1LL, static_cast<long long>(guess));
          while (i > 1 && -s.c * static_cast<double>(i - 1) <= log_p) --i;
          while (-s.c * static_cast<double>(i) > log_p) ++i;
          return s.grid_point(i);
        } else {
          const double xmin = support_min(spec);
          if (log_p == -kInf) return kInf;
          double seed = kNaN;
          if (s.L.trivial()) {
            if constexpr (std::is_same_v<S, TypeI>) {
              auto tau = try_iterated_log(-log_p, s.n);
              if (tau) seed = std::exp(*tau / s.alpha);
            } else if (s.n == 1) {
              // log x · (log x)^α = q
              seed = std::exp(std::pow(-log_p, 1.0 / (1.0 + s.alpha)));
            }
          }
          return quantile_by_bisection(xmin, log_p, seed,
                                       [&s, xmin](double x) { return closed_form_log_tail(s, x, xmin); });
        }
      },
      spec);
}

double tail_quantile(const TailSpec& spec, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("tail_quantile: p outside (0, 1]");
  return tail_quantile_log(spec, std::log(p));
}

double sample_fitness(const TailSpec& spec, Rng& rng) {
  return tail_quantile_log(spec, std::log(uniform01(rng)));
}

std::optional<double> try_log_u_n(const TypeI& s, double t) {
  auto y = try_iterated_log(t, s.n - 1);
  if (!y || !(*y > 0.0)) return std::nullopt;
  const double log_y = std::log(*y);
  if (s.n == 1 && !(log_y > 0.0)) return std::nullopt;
  const double log_z = log_y / s.alpha;
  if (!s.L.trivial()) {
    // log^{(k)} z = log^{(k-1)}(log z) must be positive for each factor.
    if (!(log_z > 0.0)) return std::nullopt;
    for (const auto& [k, gamma] : s.L.factors) {
      auto lk = try_iterated_log(log_z, k - 1);
      if (!lk || !(*lk > 0.0)) return std::nullopt;
    }
  }
  return log_u_n_expr(s, t);
}

std::optional<double> try_u_n(const TypeI& s, double t) {
  auto l = try_log_u_n(s, t);
  if (!l) return std::nullopt;
  return std::exp(*l);
}

double u_n(const TypeI& s, double t) {
  auto u = try_u_n(s, t);
  if (!u) throw DomainError("u_n undefined at t = " + format_double(t));
  return *u;
}

double v_n(const TypeI& s, double t) {
  if (!try_log_u_n(s, t)) throw DomainError("v_n undefined at t = " + format_double(t));
  const double log_z = std::log(iterated_log(t, s.n - 1)) / s.alpha;
  double lv = log_z - s.L.log_value_from_log(log_z) / s.alpha;
  if (s.n == 1) lv -= std::log(s.alpha) / s.alpha;
  return std::exp(lv);
}

double s_n(const TypeI& s, double t) {
  const double v = v_n(s, t);
  const double prod = iterated_log_product(t, s.n - 1);
  return v / std::sqrt(s.alpha * t * prod);
}

TypeIIExponents type2_exponents(int n, double alpha) {
  if (n == 1) return {(1.0 + alpha) / alpha, 1.0};
  if (n == 2) return {1.0 / (1.0 + alpha), alpha / (1.0 + alpha)};
  return {alpha, alpha};
}

double log_chi(double t, int n, double nu) {
  if (n == 1) return nu * std::log(t);
  if (n == 2) return std::pow(t, nu);
  const double l = iterated_log(t, n - 2);
  if (!(l > 0.0)) throw DomainError("chi undefined at t = " + format_double(t));
  return t * std::pow(l, -nu);
}

double log_U(double t, int n, double nu, double a) {
  const double l = iterated_log(t, std::max(0, n - 2));
  if (!(l > 0.0)) throw DomainError("U undefined at t = " + format_double(t));
  return log_chi(t, n, nu) - a * std::log(l);
}

double script_G(double x, int n, double a) {
  const double l = iterated_log(x, n);
  if (!(l > 0.0)) throw DomainError("script G undefined at x = " + format_double(x));
  return std::log(x) * std::pow(l, a);
}

GrowthPrediction predict(const TailSpec& spec, double t) {
  GrowthPrediction g;
  g.t = t;
  if (const auto* s1 = std::get_if<TypeI>(&spec)) {
    auto lu = try_log_u_n(*s1, t);
    if (!lu) throw DomainError("prediction undefined at t = " + format_double(t));
    g.log_u = *lu;
    g.u = std::exp(*lu);
    g.v = v_n(*s1, t);
    g.s = s_n(*s1, t);
    g.logX_scale = t * iterated_log(t, s1->n);
    g.exponent_target = 1.0 / s1->alpha;
    g.w_exponent_target = 1.0;
    return g;
  }
  if (const auto* s2 = std::get_if<TypeII>(&spec)) {
    const int n = s2->n;
    const double a = s2->alpha;
    const auto ex = type2_exponents(n, a);
    if (n == 1) {
      if (!(t > 1.0)) throw DomainError("prediction undefined at t = " + format_double(t));
      g.logX_scale = std::log(t);
      g.exponent_target = 1.0 + 1.0 / a;
      g.w_exponent_target = 1.0 / a;
    } else if (n == 2) {
      if (!(t > 1.0)) throw DomainError("prediction undefined at t = " + format_double(t));
      g.logX_scale = std::log(t);
      g.exponent_target = 1.0 / (1.0 + a);
      g.w_exponent_target = 1.0 / (1.0 + a);
    } else {
      auto l = try_iterated_log(t, n - 1);
      if (!l || !(*l > 0.0)) throw DomainError("prediction undefined at t = " + format_double(t));
      g.logX_scale = *l;
      g.exponent_target = -a;
      g.w_exponent_target = -a;
    }
    g.log_log_X = log_chi(t, n, ex.nu);
    g.log_log_W = log_U(t, n, ex.nu, ex.a);
    return g;
  }
  const auto& d = std::get<DiscreteStretched>(spec);
  return predict(TypeI{1, d.alpha, {}}, t);
}

std::string variant_name(const TailSpec& spec) {
  switch (spec.index()) {
    case 0: return "type1";
    case 1: return "type2";
    default: return "discrete";
  }
}

std::map<std::string, std::string> tail_to_keys(const TailSpec& spec) {
  std::map<std::string, std::string> keys;
  keys["variant"] = variant_name(spec);
  std::visit(
      [&keys](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        keys["alpha"] = format_double(s.alpha);
        if constexpr (std::is_same_v<S, DiscreteStretched>) {
          keys["c"] = format_double(s.c);
        } else {
          keys["n"] = std::to_string(s.n);
          std::string l;
          for (const auto& [k, gamma] : s.L.factors) {
            if (!l.empty()) l += ",";
            l += std::to_string(k) + ":" + format_double(gamma);
          }
          keys["L"] = l;
        }
      },
      spec);
  return keys;
}

namespace {

SlowlyVarying parse_L(const std::string& text) {
  SlowlyVarying L;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("L factor must be k:gamma, got '" + item + "'");
    L.factors.emplace_back(static_cast<int>(parse_int(item.substr(0, colon))),
                           parse_double(item.substr(colon + 1)));
  }
  return L;
}

const std::string& require(const std::map<std::string, std::string>& keys, const std::string& k) {
  auto it = keys.find(k);
  if (it == keys.end()) throw std::invalid_argument("tail config is missing '" + k + "'");
  return it->second;
}

}  // namespace

TailSpec tail_from_keys(const std::map<std::string, std::string>& keys) {
  const std::string& variant = require(keys, "variant");
  auto opt = [&keys](const std::string& k, const std::string& dflt) {
    auto it = keys.find(k);
    return it == keys.end() ? dflt : it->second;
  };
  TailSpec spec;
  if (variant == "type1" || variant == "type2") {
    const int n = static_cast<int>(parse_int(opt("n", "1")));
    const double alpha = parse_double(require(keys, "alpha"));
    SlowlyVarying L = parse_L(opt("L", ""));
    if (variant == "type1") {
      spec = TypeI{n, alpha, L};
    } else {
      spec = TypeII{n, alpha, L};
    }
  } else if (variant == "discrete") {
    spec = DiscreteStretched{parse_double(require(keys, "alpha")),
                             parse_double(opt("c", "46.051701859880914"))};
  } else {
    throw std::invalid_argument("unknown tail variant '" + variant + "'");
  }
  validate(spec);
  return spec;
}

}  // namespace gumbel
