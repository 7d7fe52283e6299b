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


#ifndef GUMBEL_SFMM_HPP
#define GUMBEL_SFMM_HPP

#include <cstdint>
#include <ostream>
#include <vector>

#include "gumbel/analysis.hpp"
#include "gumbel/gw.hpp"
#include "gumbel/tails.hpp"

namespace gumbel {

struct SfmmConfig {
  TypeI tail;
  double beta = 0.1;
  int horizon = 1000;
  std::uint64_t switch_threshold = 1000000;
  /// Families with θ_k at or below low_theta switch only at low_theta_switch.
  double low_theta = 1.5;
  std::uint64_t low_theta_switch = 1ULL << 30;
  std::uint64_t seed = 1;
  /// Generations at which summaries are produced; empty means {horizon}.
  std::vector<int> record_times;
};

/// Throws std::invalid_argument outside n = 1 or (n = 2, α < 1).
void validate(const SfmmConfig& cfg);

struct SfmmFamily {
  int k = 0;
  double theta = 1.0;
  /// u_n(k) := θ_k / (1-β).
  double fitness = 0.0;
  GwCompactPath path;
};

struct SfmmSummary {
  int t = 0;
  double log_X = 0.0;
  double S = 0.0;
  double sigma = 0.0;
  int alive = 0;
  Efd efd;
};

struct SfmmRun {
  std::vector<SfmmFamily> families;
  std::vector<SfmmSummary> summaries;
};

/// θ_k, or 1 when u_n(k) is undefined.
double sfmm_theta(const SfmmConfig& cfg, int k);

/// Simulates every family; family k uses stream derive_seed(seed, k).
SfmmRun run_sfmm(const SfmmConfig& cfg);

/// Summary at generation t (t ≤ horizon).
SfmmSummary sfmm_summary(const SfmmRun& run, int t);

void write_family_csv(std::ostream& out, const SfmmRun& run);

}  // namespace gumbel

#endif  // GUMBEL_SFMM_HPP
