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


#include "oracles.hpp"

#include <algorithm>
#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <stdexcept>

namespace oracle {

double compensated_sum(const std::vector<double>& v) {
  double s = 0.0;
  double c = 0.0;
  for (double x : v) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

double poisson_log_pmf(std::int64_t k, double m) {
  if (k < 0) return -INFINITY;
  if (m == 0.0) return k == 0 ? 0.0 : -INFINITY;
  return static_cast<double>(k) * std::log(m) - m - std::lgamma(static_cast<double>(k) + 1.0);
}

double poisson_cdf(std::int64_t k, double m) {
  if (k < 0) return 0.0;
  std::vector<double> terms;
  for (std::int64_t i = k; i >= 0; --i) terms.push_back(std::exp(poisson_log_pmf(i, m)));
  return std::min(1.0, compensated_sum(terms));
}

double poisson_sf(std::int64_t k, double m) {
  if (k <= 0) return 1.0;
  std::vector<double> terms;
  const double first = poisson_log_pmf(k, m);
  for (std::int64_t i = k;; ++i) {
    const double lp = poisson_log_pmf(i, m);
    terms.push_back(std::exp(lp));
    if (static_cast<double>(i) > m && lp < first - 50.0) break;
  }
  std::reverse(terms.begin(), terms.end());
  return compensated_sum(terms);
}

double gw_extinction(double theta) {
  if (theta <= 1.0) return 1.0;
  double lo = 0.0;
  double hi = 1.0 - 1e-15;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (std::exp(theta * (mid - 1.0)) - mid > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < sample.size()) {
    std::size_t j = i;
    while (j < sample.size() && sample[j] == sample[i]) ++j;
    const double below = static_cast<double>(i) / n;
    const double at = static_cast<double>(j) / n;
    const double left = cdf(std::nextafter(sample[i], -INFINITY));
    d = std::max({d, std::abs(at - cdf(sample[i])), std::abs(below - left)});
    i = j;
  }
  return d;
}

double chi_square_sf(double statistic, double dof) {
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

double binomial_sf(std::int64_t k, std::int64_t n, double p) {
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  const boost::math::binomial_distribution<double> d(static_cast<double>(n), p);
  return boost::math::cdf(boost::math::complement(d, static_cast<double>(k - 1)));
}

double u_n_plain(int n, double alpha, double t) {
  double y = t;
  for (int j = 1; j < n; ++j) y = std::log(y);
  const double z = std::pow(y, 1.0 / alpha);
  if (n == 1) return z * std::pow(std::log(y) / alpha, 1.0 / alpha);
  return z;
}

double h_plain(int n, double alpha, double beta, double t, double x) {
  return (t - x) * (std::log1p(-beta) + std::log(u_n_plain(n, alpha, x)));
}

long double h_plain_ld(int n, double alpha, double beta, double t, long double x) {
  long double y = x;
  for (int j = 1; j < n; ++j) y = std::log(y);
  long double log_u = std::log(y) / alpha;
  if (n == 1) log_u += std::log(std::log(y) / alpha) / alpha;
  return (static_cast<long double>(t) - x) * (std::log1p(-static_cast<long double>(beta)) + log_u);
}

double h_derivative_fd(int n, double alpha, double beta, double t, double x, int order) {
  const auto h = [&](long double z) { return h_plain_ld(n, alpha, beta, t, z); };
  const auto d = [&](long double eta) -> long double {
    const long double X = x;
    switch (order) {
      case 1:
        return (h(X + eta) - h(X - eta)) / (2 * eta);
      case 2:
        return (h(X + eta) - 2 * h(X) + h(X - eta)) / (eta * eta);
      case 3:
        return (h(X + 2 * eta) - 2 * h(X + eta) + 2 * h(X - eta) - h(X - 2 * eta)) / (2 * eta * eta * eta);
      default:
        throw std::invalid_argument("order");
    }
  };
  const long double eta = static_cast<long double>(x) * (order == 1 ? 1e-4L : order == 2 ? 1e-3L : 1e-2L);
  return static_cast<double>((4 * d(eta / 2) - d(eta)) / 3);
}

double finite_difference(const std::function<double(double)>& f, double x, double eta, int order) {
  switch (order) {
    case 1:
      return (f(x - 2 * eta) - 8 * f(x - eta) + 8 * f(x + eta) - f(x + 2 * eta)) / (12 * eta);
    case 2:
      return (-f(x - 2 * eta) + 16 * f(x - eta) - 30 * f(x) + 16 * f(x + eta) - f(x + 2 * eta)) /
             (12 * eta * eta);
    case 3:
      return (f(x + 2 * eta) - 2 * f(x + eta) + 2 * f(x - eta) - f(x - 2 * eta)) / (2 * eta * eta * eta);
    default:
      throw std::invalid_argument("order");
  }
}

QmmPlain qmm_plain(double alpha, double c, double beta, double logX0, int horizon) {
  auto f = [&](std::size_t k) { return std::pow(c * static_cast<double>(k), 1.0 / alpha); };
  auto lp = [&](std::size_t k) { return -c * static_cast<double>(k - 1) + std::log(1.0 - std::exp(-c)); };
  QmmPlain q{{1.0}, f(1), 0.0, logX0};
  for (int t = 0; t < horizon; ++t) {
    const double logX1 = q.logX + std::log(q.S);
    std::vector<double> next(q.psi.size());
    for (std::size_t i = 0; i < q.psi.size(); ++i) next[i] = (1.0 - beta) * q.psi[i] * f(i + 1) / q.S;
    std::size_t k = 1;
    while (std::log(beta) + logX1 + lp(k) > 0.0) {
      if (k > next.size()) next.push_back(0.0);
      next[k - 1] += beta * std::exp(lp(k));
      ++k;
    }
    const double z = compensated_sum(next);
    for (auto& v : next) v /= z;
    std::vector<double> m1, m2;
    for (std::size_t i = 0; i < next.size(); ++i) m1.push_back(next[i] * f(i + 1));
    q.S = compensated_sum(m1);
    for (std::size_t i = 0; i < next.size(); ++i) m2.push_back(next[i] * (f(i + 1) - q.S) * (f(i + 1) - q.S));
    q.sigma = std::sqrt(compensated_sum(m2));
    q.psi = std::move(next);
    q.logX = logX1;
  }
  return q;
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace oracle
