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


#include "gumbel/dfmm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "gumbel/io.hpp"
#include "gumbel/numeric.hpp"
#include "gumbel/taylor.hpp"

namespace gumbel {

namespace {

constexpr int kSeriesOrder = 12;
constexpr long long kSeriesStart = 64;

double ell(const DfmmConfig& cfg, double x) {
  auto lu = try_log_u_n(cfg.tail, x);
  if (!lu) throw DomainError("u_n undefined at x = " + format_double(x));
  return std::log1p(-cfg.beta) + *lu;
}

double h_value(const DfmmConfig& cfg, double x) {
  return (static_cast<double>(cfg.t) - x) * ell(cfg, x);
}

template <int Order>
Taylor<double, Order> h_taylor(const DfmmConfig& cfg, double x) {
  using T = Taylor<double, Order>;
  if (!try_log_u_n(cfg.tail, x)) throw DomainError("u_n undefined at x = " + format_double(x));
  const T X = T::variable(x);
  const T l = log_u_n_expr(cfg.tail, X) + std::log1p(-cfg.beta);
  return (static_cast<double>(cfg.t) - X) * l;
}

// m! S(j, m), with S the Stirling numbers of the second kind.
double forward_difference_weight(int j, int m) {
  static const auto table = [] {
    std::array<std::array<double, 5>, kSeriesOrder + 1> s{};
    s[0][0] = 1.0;
    for (int i = 1; i <= kSeriesOrder; ++i) {
      for (int k = 1; k <= 4; ++k) s[i][k] = k * s[i - 1][k] + s[i - 1][k - 1];
    }
    for (auto& row : s) {
      double f = 1.0;
      for (int k = 1; k <= 4; ++k) {
        f *= k;
        row[k] *= f;
      }
    }
    return s;
  }();
  return table[j][m];
}

}  // namespace

void validate(const DfmmConfig& cfg) {
  validate(TailSpec{cfg.tail});
  if (!(cfg.beta > 0.0 && cfg.beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
  const long long x0 = cfg.x0 ? *cfg.x0 : default_x0(cfg.tail);
  if (x0 < 1) throw std::invalid_argument("x0 must be >= 1");
  if (!try_log_u_n(cfg.tail, static_cast<double>(x0))) {
    throw DomainError("u_n undefined at x0 = " + std::to_string(x0));
  }
  if (cfg.t < x0) throw std::invalid_argument("t must be >= x0");
}

long long default_x0(const TypeI& tail) {
  for (long long k = 1; k < (1LL << 62); k = k < 1024 ? k + 1 : k + k / 64) {
    if (try_log_u_n(tail, static_cast<double>(k))) {
      long long lo = k < 1024 ? k : k - k / 65;
      while (lo < k && !try_log_u_n(tail, static_cast<double>(lo))) ++lo;
      return lo;
    }
  }
  throw DomainError("u_n is undefined on every representable generation");
}

LogReal log_family_size(long long k, long long t, const DfmmConfig& cfg) {
  const long long x0 = cfg.x0 ? *cfg.x0 : default_x0(cfg.tail);
  if (k < x0 || k > t) throw DomainError("log_family_size needs x0 <= k <= t");
  if (k == t) return LogReal::one();
  return LogReal::from_log(static_cast<double>(t - k) * ell(cfg, static_cast<double>(k)));
}

std::array<double, 5> h_derivatives(const DfmmConfig& cfg, double x) {
  const auto h = h_taylor<4>(cfg, x);
  return {h.derivative(0), h.derivative(1), h.derivative(2), h.derivative(3), h.derivative(4)};
}

double dh_dx(const DfmmConfig& cfg, double x) {
  const auto& s = cfg.tail;
  const double a = s.alpha;
  const double y = iterated_log(x, s.n - 1);
  const double ly = std::log(y);
  double prod = 1.0;
  double v = x;
  for (int k = 0; k < s.n; ++k) {
    prod *= v;
    v = std::log(v);
  }
  const double L1 = 1.0 / prod;
  const double log_z = ly / a;
  double omega1 = s.n == 1 ? (1.0 / a) / ly : 0.0;
  for (const auto& [k, gamma] : s.L.factors) {
    double p = 1.0;
    double w = log_z;
    for (int j = 1; j <= k; ++j) {
      p *= w;
      w = std::log(w);
    }
    omega1 -= gamma / (a * a * p);
  }
  double log_omega1 = std::log1p(-cfg.beta) - s.L.log_value_from_log(log_z) / a;
  if (s.n == 1) log_omega1 += std::log(ly / a) / a;
  return -ly / a - log_omega1 + (static_cast<double>(cfg.t) - x) * L1 * (1.0 / a + omega1);
}

SaddlePoint saddle(const DfmmConfig& cfg) {
  validate(cfg);
  const double x0 = static_cast<double>(cfg.x0 ? *cfg.x0 : default_x0(cfg.tail));
  const double t = static_cast<double>(cfg.t);
  if (!(dh_dx(cfg, x0) > 0.0) || !(dh_dx(cfg, t) < 0.0)) {
    throw std::runtime_error("h(., t) has no interior maximum on [x0, t] at t = " + std::to_string(cfg.t));
  }
  SaddlePoint sp;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = x0;
  double hi = t;
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double h1 = h_value(cfg, x1);
  double h2 = h_value(cfg, x2);
  while (hi - lo > 1e-3 * std::max(1.0, lo) && sp.iterations < 200) {
    ++sp.iterations;
    if (h1 < h2) {
      lo = x1;
      x1 = x2;
      h1 = h2;
      x2 = lo + phi * (hi - lo);
      h2 = h_value(cfg, x2);
    } else {
      hi = x2;
      x2 = x1;
      h2 = h1;
      x1 = hi - phi * (hi - lo);
      h1 = h_value(cfg, x1);
    }
  }
  // Widen until the exact derivative changes sign, then bisect to adjacent doubles.
  double width = hi - lo;
  while (lo > x0 && !(dh_dx(cfg, lo) > 0.0)) {
    lo = std::max(x0, lo - width);
    width *= 2.0;
  }
  width = hi - lo;
  while (hi < t && !(dh_dx(cfg, hi) < 0.0)) {
    hi = std::min(t, hi + width);
    width *= 2.0;
  }
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    ++sp.iterations;
    if (dh_dx(cfg, mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double dlo = std::abs(dh_dx(cfg, lo));
  const double dhi = std::abs(dh_dx(cfg, hi));
  sp.x_c = dlo <= dhi ? lo : hi;
  sp.dh_at_x_c = dh_dx(cfg, sp.x_c);
  const auto d = h_derivatives(cfg, sp.x_c);
  sp.kappa = -d[2];
  sp.d = d[3] / 6.0;
  const int n = cfg.tail.n;
  const double a = cfg.tail.alpha;
  const double prod = iterated_log_product(t, n);
  const double logn = iterated_log(t, n);
  sp.x_c_asymptotic = t / prod;
  sp.kappa_asymptotic = logn * prod / (a * t);
  sp.kappa_asymptotic_xc = logn / (a * sp.x_c);
  sp.d_asymptotic = logn / (3.0 * a * t * t) * prod * prod;
  return sp;
}

std::array<double, 3> h_differences(const DfmmConfig& cfg, long long k) {
  if (k < kSeriesStart) {
    double h[5];
    for (int i = 0; i < 5; ++i) h[i] = h_value(cfg, static_cast<double>(k + i));
    return {h[2] - 2.0 * h[1] + h[0], h[3] - 3.0 * h[2] + 3.0 * h[1] - h[0],
            h[4] - 4.0 * h[3] + 6.0 * h[2] - 4.0 * h[1] + h[0]};
  }
  const auto h = h_taylor<kSeriesOrder>(cfg, static_cast<double>(k));
  std::array<double, 3> out{};
  for (int m = 2; m <= 4; ++m) {
    double s = 0.0;
    for (int j = kSeriesOrder; j >= m; --j) s += forward_difference_weight(j, m) * h.coeffs()(j);
    out[m - 2] = s;
  }
  return out;
}

SignCheck check_signs(const DfmmConfig& cfg, double x_c) {
  const long long x0 = cfg.x0 ? *cfg.x0 : default_x0(cfg.tail);
  SignCheck sc;
  sc.first_valid_k = x0;
  for (long long k = cfg.t - 4; k >= x0; --k) {
    const auto d = h_differences(cfg, k);
    if (!(d[0] < 0.0 && d[1] > 0.0 && d[2] < 0.0)) {
      if (sc.violations == 0) sc.first_valid_k = k + 1;
      ++sc.violations;
    }
  }
  sc.holds_past_x_c = static_cast<double>(sc.first_valid_k) <= x_c;
  return sc;
}

double WaveProfile::cdf(double x) const {
  const auto* begin = f.data();
  const auto* end = f.data() + f.size();
  const auto* it = std::upper_bound(begin, end, x);
  if (it == begin) return 0.0;
  return Phi(static_cast<Eigen::Index>(it - begin) - 1);
}

WaveProfile wave_profile(const DfmmConfig& cfg) {
  validate(cfg);
  WaveProfile wp;
  wp.t = cfg.t;
  wp.x0 = cfg.x0 ? *cfg.x0 : default_x0(cfg.tail);
  const Eigen::Index m = static_cast<Eigen::Index>(cfg.t - wp.x0 + 1);
  const double log_keep = std::log1p(-cfg.beta);
  Eigen::ArrayXd log_u(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    auto lu = try_log_u_n(cfg.tail, static_cast<double>(wp.x0 + i));
    if (!lu) throw DomainError("u_n undefined at k = " + std::to_string(wp.x0 + i));
    log_u(i) = *lu;
  }
  const Eigen::ArrayXd k = Eigen::ArrayXd::LinSpaced(m, static_cast<double>(wp.x0), static_cast<double>(cfg.t));
  Eigen::ArrayXd logw = (static_cast<double>(cfg.t) - k) * (log_u + log_keep);
  Eigen::ArrayXd f = log_u.exp();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  if (!std::is_sorted(f.data(), f.data() + m)) {
    std::stable_sort(order.begin(), order.end(), [&f](Eigen::Index a, Eigen::Index b) { return f(a) < f(b); });
    Eigen::ArrayXd f2(m), w2(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      f2(i) = f(order[static_cast<std::size_t>(i)]);
      w2(i) = logw(order[static_cast<std::size_t>(i)]);
    }
    f.swap(f2);
    logw.swap(w2);
  }

  const double hmax = logw.maxCoeff();
  const Eigen::ArrayXd w = (logw - hmax).exp();
  Eigen::ArrayXd cum(m);
  KahanSum acc;
  for (Eigen::Index i = 0; i < m; ++i) {
    acc += w(i);
    cum(i) = acc.value();
  }
  const double total = cum(m - 1);
  wp.Phi = cum / total;
  wp.Phi(m - 1) = 1.0;
  KahanSum mean;
  for (Eigen::Index i = 0; i < m; ++i) mean += w(i) * f(i);
  wp.S = mean.value() / total;
  KahanSum var;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double d = f(i) - wp.S;
    var += w(i) * d * d;
  }
  wp.sigma = std::sqrt(var.value() / total);
  wp.logX = hmax + std::log(total);
  wp.f = std::move(f);
  wp.log_weight = std::move(logw);
  wp.saddle = saddle(cfg);
  if (cfg.check_signs) wp.signs = check_signs(cfg, wp.saddle.x_c);
  return wp;
}

void write_wave_csv(std::ostream& out, const Eigen::ArrayXd& f, const Eigen::ArrayXd& Phi) {
  out << "f,Phi\n";
  double prev = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (Phi(i) > prev || i + 1 == f.size()) {
      out << format_double(f(i)) << ',' << format_double(Phi(i)) << '\n';
      prev = Phi(i);
    }
  }
}

}  // namespace gumbel
