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
#include <sstream>

#include "gumbel/random.hpp"
#include "gumbel/sfmm.hpp"
#include "oracles.hpp"

namespace gumbel {
namespace {

SfmmConfig config(int horizon, std::uint64_t seed) {
  SfmmConfig c;
  c.tail = TypeI{1, 2.0, {}};
  c.beta = 0.1;
  c.horizon = horizon;
  c.seed = seed;
  return c;
}

TEST(Sfmm, ThetaFollowsPredictor) {
  const SfmmConfig c = config(100, 1);
  EXPECT_EQ(sfmm_theta(c, 0), 1.0);
  EXPECT_EQ(sfmm_theta(c, 1), 1.0);
  for (int k : {2, 10, 99}) EXPECT_NEAR(sfmm_theta(c, k), 0.9 * oracle::u_n_plain(1, 2.0, k), 1e-12 * k);
}

TEST(Sfmm, FamiliesUseTheirOwnStreams) {
  const SfmmConfig c = config(300, 5);
  const SfmmRun run = run_sfmm(c);
  ASSERT_EQ(run.families.size(), 301u);
  for (int k : {0, 7, 150, 300}) {
    GwConfig g{sfmm_theta(c, k), sfmm_theta(c, k) <= c.low_theta ? c.low_theta_switch : c.switch_threshold,
               c.horizon - k};
    Rng rng(derive_seed(5, static_cast<std::uint64_t>(k)));
    const GwCompactPath p = gw_simulate_compact(g, rng);
    EXPECT_EQ(p.exact, run.families[static_cast<std::size_t>(k)].path.exact);
  }
}

TEST(Sfmm, SummaryCountsAndBounds) {
  const SfmmRun run = run_sfmm(config(400, 9));
  const SfmmSummary s = run.summaries.back();
  EXPECT_EQ(s.t, 400);
  EXPECT_GE(s.alive, 1);
  EXPECT_GE(s.log_X, std::log(static_cast<double>(s.alive)) - 1e-12);
  EXPECT_FALSE(s.efd.empty());
  EXPECT_DOUBLE_EQ(s.efd.cum(s.efd.cum.size() - 1), 1.0);
  EXPECT_GT(s.sigma, 0.0);
  EXPECT_THROW(sfmm_summary(run, 401), std::out_of_range);
  // The founder of the current generation is always alive.
  EXPECT_FALSE(run.families.back().path.extinct());
}

TEST(Sfmm, Reproducible) {
  auto render = [] {
    std::ostringstream os;
    write_family_csv(os, run_sfmm(config(500, 3)));
    return os.str();
  };
  EXPECT_EQ(render(), render());
}

TEST(Sfmm, ValidateRestrictsTails) {
  SfmmConfig c = config(10, 1);
  c.tail = TypeI{2, 1.5, {}};
  EXPECT_THROW(validate(c), std::invalid_argument);
  c.tail = TypeI{2, 0.5, {}};
  EXPECT_NO_THROW(validate(c));
  c.tail = TypeI{3, 0.5, {}};
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = config(10, 1);
  c.record_times = {11};
  EXPECT_THROW(validate(c), std::invalid_argument);
}

}  // namespace
}  // namespace gumbel
