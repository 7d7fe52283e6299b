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


#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "gumbel/analysis.hpp"
#include "gumbel/engine.hpp"
#include "gumbel/numeric.hpp"
#include "oracles.hpp"

namespace gumbel {
namespace {

TEST(Efd, MergesTiesAndNormalizes) {
  Eigen::ArrayXd f(4), lw(4);
  f << 3.0, 1.0, 3.0, 2.0;
  lw << std::log(1.0), std::log(2.0), std::log(3.0), -kInf;
  const Efd e = efd_from_log_weights(f, lw, "x");
  ASSERT_EQ(e.f.size(), 2);
  EXPECT_DOUBLE_EQ(e.cum(0), 2.0 / 6.0);
  EXPECT_DOUBLE_EQ(e.cum(1), 1.0);
  EXPECT_NEAR(e.S, (2.0 * 1.0 + 4.0 * 3.0) / 6.0, 1e-15);
  EXPECT_NEAR(e.sigma, std::sqrt(2.0 / 6.0 * 4.0 / 6.0) * 2.0, 1e-15);
  EXPECT_EQ(e.cdf(0.5), 0.0);
  EXPECT_DOUBLE_EQ(e.cdf(1.0), 2.0 / 6.0);
  EXPECT_EQ(e.cdf(3.0), 1.0);
}

TEST(Efd, EmptyIsHeaviside) {
  const Efd e;
  EXPECT_EQ(e.cdf(-1e-300), 0.0);
  EXPECT_EQ(e.cdf(0.0), 1.0);
}

TEST(StandardizedWave, GaussianSampleIsClose) {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> n(50.0, 3.0);
  const int m = 200000;
  Eigen::ArrayXd f(m), lw = Eigen::ArrayXd::Zero(m);
  for (int i = 0; i < m; ++i) f(i) = n(gen);
  const Efd e = efd_from_log_weights(f, lw, "g");
  const StandardizedWave w = standardized_wave(e, e.S, e.sigma);
  EXPECT_LT(ks_to_gaussian(w), 0.006);
  EXPECT_THROW(standardized_wave(e, 0.0, 0.0), std::invalid_argument);
}

TEST(StandardizedDensity, ExactGaussianHasZeroError) {
  Eigen::ArrayXd F = Eigen::ArrayXd::LinSpaced(101, 0.0, 20.0);
  Eigen::ArrayXd psi = ((F - 10.0) / 2.0).unaryExpr([](double y) { return gaussian_pdf(y) / 2.0; });
  const auto [y, g] = standardized_density(F, psi, 10.0, 2.0);
  EXPECT_LT(density_sup_error(y, g), 1e-15);
  EXPECT_TRUE(std::isnan(density_sup_error(y * 100.0 + 1000.0, g)));
}

TEST(WidthExponent, SyntheticPowerLaw) {
  std::vector<double> t, s;
  for (int i = 0; i < 100; ++i) {
    t.push_back(1000.0 * std::pow(10.0, i / 99.0));
    s.push_back(std::pow(t.back(), 0.25));
  }
  const SlopeFit fit = width_exponent(t, s, 0.0);
  EXPECT_NEAR(fit.slope, 0.25, 1e-12);
  std::vector<double> lt, ls;
  for (std::size_t i = 0; i < t.size(); ++i) {
    lt.push_back(std::log(t[i]));
    ls.push_back(std::log(s[i]));
  }
  EXPECT_NEAR(fit.slope, oracle::ols_slope(lt, ls), 1e-12);
  EXPECT_THROW(width_exponent({1, 2, 3}, {1, 2, 3}), std::invalid_argument);
  std::vector<double> narrow_t, narrow_s;
  for (int i = 0; i < 20; ++i) {
    narrow_t.push_back(100 + i);
    narrow_s.push_back(1.0);
  }
  EXPECT_THROW(width_exponent(narrow_t, narrow_s), std::invalid_argument);
}

TEST(Binomial, UpperTailMatchesDirectSum) {
  for (auto [k, n, p] : {std::tuple{3LL, 10LL, 0.2}, std::tuple{0LL, 5LL, 0.5}, std::tuple{40LL, 100LL, 0.3}}) {
    std::vector<double> terms;
    for (long long i = k; i <= n; ++i) {
      double c = 1.0;
      for (long long j = 0; j < i; ++j) c *= static_cast<double>(n - j) / static_cast<double>(j + 1);
      terms.push_back(c * std::pow(p, i) * std::pow(1 - p, n - i));
    }
    EXPECT_NEAR(binomial_upper_tail(k, n, p), oracle::compensated_sum(terms), 1e-13);
  }
  EXPECT_EQ(binomial_upper_tail(11, 10, 0.5), 0.0);
}

TEST(GrowthExponents, TypeISyntheticTrajectoryHitsTarget) {
  const TypeI s{1, 2.0, {}};
  std::vector<TrajectoryRecord> recs;
  for (int t = 0; t <= 50; ++t) {
    TrajectoryRecord r;
    r.t = t;
    r.log_X = t > 1 ? t * std::log(t) / 2.0 : 0.0;
    r.W = t > 1 ? u_n(s, t) : 0.0;
    recs.push_back(r);
  }
  const auto rows = growth_exponents(recs, s);
  ASSERT_EQ(rows.size(), 49u);
  for (const auto& g : rows) {
    EXPECT_NEAR(g.statistic, g.target, 1e-12);
    EXPECT_NEAR(g.w_statistic, 1.0, 1e-12);
  }
}

class TypeIISynthetic : public ::testing::TestWithParam<std::tuple<int, double>> {};

TEST_P(TypeIISynthetic, StatisticEqualsTarget) {
  const auto [n, a] = GetParam();
  const TypeII s{n, a, {}};
  const auto ex = type2_exponents(n, a);
  std::vector<TrajectoryRecord> recs;
  for (double t : {30.0, 100.0, 1000.0, 50000.0}) {
    TrajectoryRecord r;
    r.t = static_cast<int>(t);
    r.log_X = std::exp(log_chi(t, n, ex.nu));
    recs.push_back(r);
  }
  const auto rows = growth_exponents(recs, s);
  ASSERT_FALSE(rows.empty());
  for (const auto& g : rows) {
    EXPECT_NEAR(g.statistic / g.target, 1.0, 1e-12) << g.t;
    const auto p = predict(s, g.t);
    EXPECT_NEAR(std::log(std::exp(log_chi(g.t, n, ex.nu))) / *p.log_log_X, 1.0, 1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(Orders, TypeIISynthetic,
                         ::testing::Values(std::tuple{1, 1.0}, std::tuple{1, 2.5}, std::tuple{2, 1.0},
                                           std::tuple{3, 0.5}, std::tuple{3, 2.0}));

TEST(Verdicts, JsonFields) {
  std::ostringstream os;
  write_verdicts_json(os, {{"x", 0.5, 0.0, 0.1, false, "n"}});
  const std::string s = os.str();
  EXPECT_NE(s.find("\"statistic_name\": \"x\""), std::string::npos);
  EXPECT_NE(s.find("\"pass\": false"), std::string::npos);
  EXPECT_NE(s.find("\"tolerance\": 0.1"), std::string::npos);
}

}  // namespace
}  // namespace gumbel
