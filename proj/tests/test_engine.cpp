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
#include <sstream>

#include "gumbel/engine.hpp"
#include "gumbel/random.hpp"
#include "oracles.hpp"

namespace gumbel {
namespace {

ModelParams plain(ModelVariant v, double beta, double alpha, std::uint64_t seed) {
  ModelParams p;
  p.variant = v;
  p.beta = beta;
  p.tail = TypeI{1, alpha, {}};
  p.seed = seed;
  return p;
}

class FittestMutantLaw : public ::testing::TestWithParam<double> {};

TEST_P(FittestMutantLaw, MatchesClosedFormCdf) {
  const double N = GetParam(), beta = 0.05;
  const TailSpec tail = TypeI{1, 2.0, {}};
  Rng rng(derive_seed(31, static_cast<std::uint64_t>(N)));
  std::vector<double> w;
  const int n = 20000;
  for (int i = 0; i < n; ++i) w.push_back(fittest_mutant(LogReal::from_linear(N), beta, tail, rng).value_or(0.0));
  const auto cdf = [&](double x) { return x < 0 ? 0.0 : std::pow(1.0 - beta * std::exp(-x * x), N); };
  EXPECT_LT(oracle::ks_distance(w, cdf), 1.95 / std::sqrt(n));
}

INSTANTIATE_TEST_SUITE_P(Sizes, FittestMutantLaw, ::testing::Values(1.0, 10.0, 1000.0));

TEST(FittestMutant, AgreesWithBruteForceMaximum) {
  // Brute force: N offspring, each a mutant with probability β, fitness by
  // inverting G(x) = exp(-x^2) directly.
  const int N = 10;
  const double beta = 0.3;
  Rng a(1), b(2);
  std::vector<double> lib, brute;
  for (int i = 0; i < 20000; ++i) {
    lib.push_back(fittest_mutant(LogReal::from_linear(N), beta, TypeI{1, 2.0, {}}, a).value_or(0.0));
    double best = 0.0;
    for (int j = 0; j < N; ++j) {
      if (uniform01(b) < beta) best = std::max(best, std::sqrt(-std::log(uniform01(b))));
    }
    brute.push_back(best);
  }
  std::sort(brute.begin(), brute.end());
  const auto ecdf = [&](double x) {
    return static_cast<double>(std::upper_bound(brute.begin(), brute.end(), x) - brute.begin()) / brute.size();
  };
  EXPECT_LT(oracle::ks_distance(lib, ecdf), 1.95 * std::sqrt(2.0 / 20000));
}

TEST(FittestMutant, HugeNIsFinite) {
  Rng rng(3);
  const auto w = fittest_mutant(LogReal::from_log(1e4), 0.1, TypeI{1, 1.0, {}}, rng);
  ASSERT_TRUE(w.has_value());
  EXPECT_NEAR(*w, 1e4, 20.0);
  EXPECT_FALSE(fittest_mutant(LogReal::zero(), 0.1, TypeI{1, 1.0, {}}, rng).has_value());
}

TEST(Step, ThinningSplitsIntoIndependentPoissons) {
  const double F = 3.0, count = 10.0, beta = 0.1;
  const ModelParams p = plain(ModelVariant::kMmm, beta, 1.0, 0);
  Rng rng(8);
  std::map<int, int> keep, mut;
  double sk = 0, sm = 0, skm = 0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    const Population next = step(Population::single(F, count), p, rng);
    int k = 0, m = 0;
    for (const auto& f : next.families) {
      if (f.fitness == F) {
        k = static_cast<int>(std::llround(f.abundance.linear()));
      } else {
        m += static_cast<int>(std::llround(f.abundance.linear()));
      }
    }
    ++keep[k];
    ++mut[m];
    sk += k;
    sm += m;
    skm += static_cast<double>(k) * m;
  }
  auto gof = [&](const std::map<int, int>& counts, double mean) {
    double stat = 0.0;
    int cells = 0;
    double rest_o = n, rest_e = n;
    for (int k = 0;; ++k) {
      const double e = std::exp(oracle::poisson_log_pmf(k, mean)) * n;
      if (e < 20.0 && k > mean) break;
      if (e < 20.0) continue;
      const double o = counts.count(k) ? counts.at(k) : 0;
      stat += (o - e) * (o - e) / e;
      rest_o -= o;
      rest_e -= e;
      ++cells;
    }
    stat += (rest_o - rest_e) * (rest_o - rest_e) / rest_e;
    return oracle::chi_square_sf(stat, cells);
  };
  EXPECT_GT(gof(keep, (1 - beta) * F * count), 1e-4);
  EXPECT_GT(gof(mut, beta * F * count), 1e-4);
  const double cov = skm / n - (sk / n) * (sm / n);
  EXPECT_NEAR(cov, 0.0, 4.0 * std::sqrt(27.0 * 3.0 / n));
}

TEST(Step, FmmAddsAtMostOneMutantFamily) {
  const ModelParams p = plain(ModelVariant::kFmm, 0.5, 1.0, 0);
  Rng rng(9);
  for (int i = 0; i < 2000; ++i) {
    const Population next = step(Population::single(2.0, 50.0), p, rng);
    EXPECT_LE(next.families.size(), 2u);
    if (next.stats.W > 0.0) EXPECT_LE(next.stats.W, next.stats.Q);
  }
}

TEST(Step, LargePopulationsUseBulkAndStaySorted) {
  ModelParams p = plain(ModelVariant::kMmm, 0.2, 1.0, 0);
  Rng rng(10);
  const Population next = step(Population::single(2.0, 1e9), p, rng);
  EXPECT_GT(next.flags.deterministic_family_steps, 0u);
  EXPECT_GT(next.flags.mmm_bulk_generations, 0u);
  for (std::size_t i = 1; i < next.families.size(); ++i) {
    EXPECT_LT(next.families[i - 1].fitness, next.families[i].fitness);
  }
  EXPECT_NEAR(next.stats.Xi.log(), std::log(2e9), 1e-3);
}

TEST(Run, HorizonZeroHasOnlyInitialRecord) {
  const Trajectory tr = run(plain(ModelVariant::kFmm, 0.1, 1.0, 1), Population::single(2.0, 1.0), 0);
  ASSERT_EQ(tr.records.size(), 1u);
  EXPECT_EQ(tr.termination, "horizon");
}

TEST(Run, ExtinctionIsAbsorbing) {
  int extinct = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Trajectory tr = run(plain(ModelVariant::kMmm, 0.1, 1.0, s), Population::single(0.8, 1.0), 60);
    bool seen = false;
    for (const auto& r : tr.records) {
      if (seen) EXPECT_TRUE(r.extinct);
      seen = seen || r.extinct;
    }
    extinct += tr.termination == "extinct" ? 1 : 0;
  }
  EXPECT_GT(extinct, 0);
}

TEST(Run, SurvivalIsStrictlyBetweenZeroAndOne) {
  const auto est = survival_probability(plain(ModelVariant::kFmm, 0.01, 1.0, 77), Population::single(1.0, 1.0),
                                        2000, 400);
  EXPECT_GT(est.survivors, 0);
  EXPECT_LT(est.survivors, 2000);
  EXPECT_LE(est.lower, est.estimate);
  EXPECT_GE(est.upper, est.estimate);
}

TEST(Run, CsvIsByteReproducible) {
  auto render = [](ModelVariant v) {
    const Trajectory tr = run(plain(v, 0.1, 2.0, 123), Population::single(2.0, 5.0), 40);
    std::ostringstream os;
    write_trajectory_csv(os, tr);
    return os.str();
  };
  EXPECT_EQ(render(ModelVariant::kFmm), render(ModelVariant::kFmm));
  EXPECT_EQ(render(ModelVariant::kMmm), render(ModelVariant::kMmm));
}

TEST(Run, FamilyCapMergesAndFlags) {
  ModelParams p = plain(ModelVariant::kMmm, 0.5, 1.0, 4);
  p.family_cap = 8;
  const Trajectory tr = run(p, Population::single(3.0, 20.0), 5);
  EXPECT_GT(tr.flags.merged_families, 0u);
}

TEST(Engine, ValidateAndVariantNames) {
  ModelParams p;
  p.beta = 1.0;
  EXPECT_THROW(validate(p), std::invalid_argument);
  EXPECT_EQ(parse_variant(to_string(ModelVariant::kMmm)), ModelVariant::kMmm);
  EXPECT_THROW(parse_variant("xmm"), std::invalid_argument);
}

TEST(Engine, WilsonIntervalKnownValue) {
  const auto e = wilson_interval(50, 100);
  EXPECT_NEAR(e.lower, 0.4038, 1e-4);
  EXPECT_NEAR(e.upper, 0.5962, 1e-4);
}

}  // namespace
}  // namespace gumbel
