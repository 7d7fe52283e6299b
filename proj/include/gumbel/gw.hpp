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


#ifndef GUMBEL_GW_HPP
#define GUMBEL_GW_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gumbel/log_real.hpp"
#include "gumbel/random.hpp"

namespace gumbel {

/// Switch threshold that keeps a path in exact mode forever.
inline constexpr std::uint64_t kNeverSwitch = std::numeric_limits<std::uint64_t>::max();

struct GwConfig {
  double theta = 2.0;
  /// Deterministic growth starts once the size reaches this value.
  std::uint64_t switch_threshold = 1000000;
  int horizon = 20;
};

struct GwPath {
  std::vector<LogReal> sizes;
  std::optional<int> switch_time;
};

/// Path stored as its exact prefix; later sizes follow θ^t from the switch.
struct GwCompactPath {
  double theta = 1.0;
  int horizon = 0;
  /// Exact sizes for generations 0 .. exact.size()-1.
  std::vector<std::uint64_t> exact;
  std::optional<int> switch_time;

  bool extinct() const { return !switch_time && !exact.empty() && exact.back() == 0; }
  LogReal size_at(int t) const;
};

/// One Poisson offspring generation from m parents.
std::uint64_t gw_step(std::uint64_t m, double theta, Rng& rng);

GwPath gw_simulate_hybrid(const GwConfig& cfg, Rng& rng);

/// Same law and random stream as gw_simulate_hybrid, in O(switch time) memory.
GwCompactPath gw_simulate_compact(const GwConfig& cfg, Rng& rng);

struct AdmissibilityReport {
  bool admissible = true;
  /// 1-based indices of the failed admissibility conditions.
  std::vector<int> failed;
  std::vector<std::string> details;
};

struct ConcentrationEnvelope {
  double theta = 0.0;
  double epsilon = 0.0;
  double c = 0.0;
  /// 2 θ^{-(1-2ε)/2}.
  double halfwidth = 0.0;
  /// exp(-θ^{2ε}/5), the bound on the probability of ever leaving the band.
  double failure_bound = 0.0;
  AdmissibilityReport admissibility;

  double a(int t) const;
  double b(int t) const;
  double B(int t) const;
};

/// Horizon up to which the admissibility conditions are checked pointwise.
inline constexpr int kAdmissibilityHorizon = 64;

/// Envelope quantities plus the admissibility report; throws
/// std::invalid_argument for ε outside (0, 1/2) or θ ≤ 1.
ConcentrationEnvelope envelope(double theta, double epsilon);

/// As envelope(), but throws std::domain_error naming the failed conditions.
ConcentrationEnvelope require_admissible(double theta, double epsilon);

AdmissibilityReport check_admissibility(double theta, double epsilon);

/// θ e^{-θ(1-b+b log b)}, bounding P(Poisson(θ) ≤ ⌊bθ⌋).
double poisson_tail_bound_lower(double b, double theta);
/// B/(B-1) e^{-θ(1-B+B log B)}, bounding P(Poisson(θ) ≥ ⌈Bθ⌉).
double poisson_tail_bound_upper(double B, double theta);

/// True when |X_t/θ^t - 1| exceeds halfwidth at some t of the path.
bool band_violated(const GwPath& path, double theta, double halfwidth);

/// Extinction probability of a Poisson(θ) Galton-Watson process.
double poisson_gw_extinction(double theta);

void write_ensemble_csv(std::ostream& out, const std::vector<GwPath>& paths);

}  // namespace gumbel

#endif  // GUMBEL_GW_HPP
