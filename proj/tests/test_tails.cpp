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
#include <map>
#include <vector>

#include "gumbel/numeric.hpp"
#include "gumbel/random.hpp"
#include "gumbel/tails.hpp"
#include "oracles.hpp"

namespace gumbel {
namespace {

TEST(Tails, TypeIPlainClosedForms) {
  for (double a : {0.5, 1.0, 2.0, 3.0}) {
    const TailSpec s1 = TypeI{1, a, {}};
    const TailSpec s2 = TypeI{2, a, {}};
    for (double x : {0.0, 0.3, 1.0, 2.5, 7.0}) {
      EXPECT_NEAR(log_tail(s1, x), -std::pow(x, a), 1e-12 * (1.0 + std::pow(x, a)));
      EXPECT_NEAR(log_tail(s2, x), -std::exp(std::pow(x, a)), 1e-12 * std::exp(std::pow(x, a)));
    }
    EXPECT_EQ(log_tail(s1, -1.0), 0.0);
  }
}

TEST(Tails, TypeIWithLMatchesDirectEvaluation) {
  const TypeI s{1, 2.0, SlowlyVarying{{{1, 0.5}, {2, -1.0}}}};
  const double xmin = support_min(s);
  EXPECT_GT(xmin, 0.0);
  for (double x : {xmin * 1.5, 20.0, 100.0, 1e4}) {
    const double L = std::pow(std::log(x), 0.5) / std::log(std::log(x));
    EXPECT_NEAR(log_tail(s, x), -x * x * L, 1e-12 * x * x * L);
  }
  EXPECT_EQ(log_tail(s, xmin * 0.5), 0.0);
}

TEST(Tails, TypeIIPlainClosedForm) {
  const TailSpec s = TypeII{1, 1.5, {}};
  for (double x : {10.0, 1e3, 1e8}) {
    EXPECT_NEAR(log_tail(s, x), -std::pow(std::log(x), 2.5), 1e-12 * std::pow(std::log(x), 2.5));
  }
}

TEST(Tails, DiscreteGridTailEqualsBruteForcePartialSums) {
  const DiscreteStretched d{1.5, 0.7};
  for (long long i = 1; i <= 40; ++i) {
    std::vector<double> above;
    for (long long j = i + 1; j <= i + 400; ++j) above.push_back(std::exp(-0.7 * (j - 1)) * (1.0 - std::exp(-0.7)));
    const double brute = oracle::compensated_sum(above);
    const double fi = std::pow(0.7 * i, 1.0 / 1.5);
    const double fn = std::pow(0.7 * (i + 1), 1.0 / 1.5);
    EXPECT_NEAR(std::exp(log_tail(d, fi)), brute, 1e-13 * brute);
    EXPECT_NEAR(std::exp(log_tail(d, 0.5 * (fi + fn))), brute, 1e-13 * brute);
    EXPECT_EQ(d.index_at(fi), i);
    EXPECT_EQ(d.index_at(std::nextafter(fi, 0.0)), i - 1);
  }
  EXPECT_EQ(log_tail(d, 0.0), 0.0);
}

class QuantileInverse : public ::testing::TestWithParam<TailSpec> {};

TEST_P(QuantileInverse, IsTheGeneralizedInverse) {
  const TailSpec& s = GetParam();
  for (double lp : {-1e-8, -0.01, -0.5, -3.0, -40.0, -700.0, -1e5}) {
    const double x = tail_quantile_log(s, lp);
    EXPECT_LE(log_tail(s, x), lp);
    const double below = std::nextafter(x, -kInf);
    if (below >= support_min(s)) EXPECT_GT(log_tail(s, below), lp);
  }
}

INSTANTIATE_TEST_SUITE_P(Specs, QuantileInverse,
                         ::testing::Values(TailSpec{TypeI{1, 1.0, {}}}, TailSpec{TypeI{1, 2.5, {}}},
                                           TailSpec{TypeI{2, 0.5, {}}},
                                           TailSpec{TypeI{1, 2.0, SlowlyVarying{{{1, 0.5}, {2, -1.0}}}}},
                                           TailSpec{TypeII{1, 1.0, {}}}, TailSpec{TypeII{2, 2.0, {}}},
                                           TailSpec{DiscreteStretched{2.0, 3.0}}));

TEST(Tails, SampledFitnessFollowsTail) {
  const TailSpec s = TypeI{1, 2.0, {}};
  Rng rng(21);
  std::vector<double> xs;
  for (int i = 0; i < 100000; ++i) xs.push_back(sample_fitness(s, rng));
  const double ks = oracle::ks_distance(xs, [](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-x * x); });
  EXPECT_LT(ks, 1.63 / std::sqrt(100000.0) * 1.5);
}

TEST(Tails, DiscreteSamplesFollowGridMasses) {
  const DiscreteStretched d{1.0, 0.5};
  Rng rng(4);
  std::map<long long, int> counts;
  const int n = 200000;
  for (int i = 0; i < n; ++i) ++counts[d.index_at(sample_fitness(d, rng))];
  double stat = 0.0;
  int cells = 0;
  double tail_obs = n, tail_exp = 1.0;
  for (long long i = 1; i <= 12; ++i) {
    const double e = std::exp(-0.5 * (i - 1)) * (1.0 - std::exp(-0.5)) * n;
    stat += (counts[i] - e) * (counts[i] - e) / e;
    tail_obs -= counts[i];
    tail_exp -= e / n;
    ++cells;
  }
  stat += (tail_obs - tail_exp * n) * (tail_obs - tail_exp * n) / (tail_exp * n);
  EXPECT_GT(oracle::chi_square_sf(stat, cells), 1e-4);
  EXPECT_EQ(counts.count(0), 0u);
}

TEST(Predictors, FirstOrderPlainValues) {
  const TypeI s{1, 1.0, {}};
  EXPECT_NEAR(u_n(s, 100.0), 100.0 * std::log(100.0), 1e-10);
  EXPECT_NEAR(v_n(s, 100.0), 100.0, 1e-10);
  EXPECT_NEAR(s_n(s, 100.0), 10.0, 1e-12);
}

TEST(Predictors, MatchDirectFormulas) {
  for (double a : {0.5, 1.0, 2.0, 3.0}) {
    for (double t : {50.0, 1e4, 1e8}) {
      EXPECT_NEAR(u_n(TypeI{1, a, {}}, t), oracle::u_n_plain(1, a, t), 1e-12 * oracle::u_n_plain(1, a, t));
      EXPECT_NEAR(u_n(TypeI{2, a, {}}, t), oracle::u_n_plain(2, a, t), 1e-12 * oracle::u_n_plain(2, a, t));
      EXPECT_NEAR(v_n(TypeI{1, a, {}}, t), std::pow(t / a, 1.0 / a), 1e-12 * std::pow(t / a, 1.0 / a));
      const double v2 = std::pow(std::log(t), 1.0 / a);
      EXPECT_NEAR(v_n(TypeI{2, a, {}}, t), v2, 1e-12 * v2);
      const double s2 = v2 / std::sqrt(a * t * std::log(t));
      EXPECT_NEAR(s_n(TypeI{2, a, {}}, t), s2, 1e-12 * s2);
      const double gamma = 0.7;
      const TypeI sl{1, a, SlowlyVarying{{{1, gamma}}}};
      const double lz = std::log(t) / a;
      const double want = std::pow(t, 1.0 / a) * std::pow(lz, 1.0 / a) * std::pow(lz, -gamma / a);
      EXPECT_NEAR(u_n(sl, t), want, 1e-12 * want);
    }
  }
  EXPECT_FALSE(try_u_n(TypeI{1, 1.0, {}}, 1.0).has_value());
  EXPECT_THROW(u_n(TypeI{3, 1.0, {}}, 2.0), DomainError);
}

TEST(Predictors, TypeIIExponentsAndIdentities) {
  const double a = 1.5;
  EXPECT_DOUBLE_EQ(type2_exponents(1, a).nu, (1 + a) / a);
  EXPECT_DOUBLE_EQ(type2_exponents(2, a).a, a / (1 + a));
  EXPECT_DOUBLE_EQ(type2_exponents(4, a).nu, a);
  const double t = 1e5;
  EXPECT_NEAR(log_chi(t, 1, 2.0), 2.0 * std::log(t), 1e-12);
  EXPECT_NEAR(log_chi(t, 2, 0.5), std::sqrt(t), 1e-9);
  EXPECT_NEAR(log_chi(t, 3, a), t * std::pow(std::log(t), -a), 1e-9);
  EXPECT_NEAR(log_U(t, 3, a, a), log_chi(t, 3, a) - a * std::log(std::log(t)), 1e-9);
  EXPECT_NEAR(script_G(1e6, 2, a), std::log(1e6) * std::pow(std::log(std::log(1e6)), a), 1e-12);
  const auto g = predict(TypeII{1, a, {}}, t);
  EXPECT_DOUBLE_EQ(*g.log_log_X, log_chi(t, 1, (1 + a) / a));
  EXPECT_NEAR(*g.log_log_X / g.logX_scale, g.exponent_target, 1e-12);
}

TEST(Tails, KeysRoundTrip) {
  const std::vector<TailSpec> specs = {TypeI{2, 0.5, SlowlyVarying{{{1, -0.25}, {3, 2.0}}}}, TypeII{1, 3.0, {}},
                                       DiscreteStretched{2.0, 46.051701859880914}};
  for (const auto& s : specs) EXPECT_EQ(tail_from_keys(tail_to_keys(s)), s);
  EXPECT_THROW(tail_from_keys({{"variant", "type1"}, {"alpha", "-1"}}), std::invalid_argument);
  EXPECT_THROW(tail_from_keys({{"variant", "weird"}}), std::invalid_argument);
}

TEST(Tails, ValidateRejectsBadParameters) {
  EXPECT_THROW(validate(TypeI{0, 1.0, {}}), std::invalid_argument);
  EXPECT_THROW(validate(TypeI{1, 0.0, {}}), std::invalid_argument);
  EXPECT_THROW(validate(DiscreteStretched{1.0, -1.0}), std::invalid_argument);
  EXPECT_THROW(validate(TypeI{1, 1.0, SlowlyVarying{{{1, 1.0}, {1, 2.0}}}}), std::invalid_argument);
}

}  // namespace
}  // namespace gumbel
