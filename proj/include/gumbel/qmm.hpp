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


#ifndef GUMBEL_QMM_HPP
#define GUMBEL_QMM_HPP

#include <Eigen/Core>
#include <numbers>
#include <ostream>
#include <vector>

#include "gumbel/analysis.hpp"
#include "gumbel/tails.hpp"

namespace gumbel {

struct QmmConfig {
  double alpha = 2.0;
  double c = 20.0 * std::numbers::ln10;
  double beta = 1e-20;
  double logX0 = 100.0 * std::numbers::ln10;
  int horizon = 1000;
  /// Largest grid index the window may reach.
  long long k_limit = 1LL << 24;

  DiscreteStretched grid() const { return {alpha, c}; }
};

/// Throws std::invalid_argument unless α > 0, c > 0, 0 < β < 1.
void validate(const QmmConfig& cfg);

/// Frequencies ψ_k on the window [k_min, k_max], stored as logarithms.
struct FrequencyState {
  int t = 0;
  /// log ψ_k for k = k_min..k_max.
  Eigen::ArrayXd log_psi;
  /// log f_k on the same window.
  Eigen::ArrayXd log_f;
  double S = 0.0;
  double sigma = 0.0;
  double logX = 0.0;
  long long k_min = 1;
  long long k_max = 1;

  double psi(long long k) const;
};

/// All mass on f_1, S_0 = f_1, log X(0) = logX0.
FrequencyState qmm_init(const QmmConfig& cfg);

/// Advances one generation in place. Throws std::length_error when the
/// window would pass k_limit.
void qmm_step(FrequencyState& state, const QmmConfig& cfg);

struct DensityPoint {
  double F = 0.0;
  double psi = 0.0;
  /// f_{k+j} - f_{k-j}.
  double width = 0.0;
};

/// ψ(F,t) = Σ_{k-j ≤ i ≤ k+j} ψ_i / (f_{k+j} - f_{k-j}) at every center k
/// with the whole bin inside the window.
std::vector<DensityPoint> density(const FrequencyState& state, const QmmConfig& cfg, int j);

/// Σ ψ(F,t)·width over disjoint bins (centers j+1, 3j+2, ...).
double density_mass(const FrequencyState& state, const QmmConfig& cfg, int j);

/// σ_t ψ(S_t + σ_t y, t) at the bin centers.
std::pair<Eigen::ArrayXd, Eigen::ArrayXd> standardized_density(const FrequencyState& state, const QmmConfig& cfg,
                                                               int j);

Efd efd_from_state(const FrequencyState& state, const QmmConfig& cfg);

struct QmmSeriesPoint {
  int t = 0;
  double S = 0.0;
  double sigma = 0.0;
  double logX = 0.0;
  long long k_max = 1;
};

struct QmmRun {
  std::vector<FrequencyState> snapshots;
  std::vector<QmmSeriesPoint> series;
};

/// Runs to the horizon. Snapshots are taken at record_times; the series gets
/// a point every series_stride generations and at every record time.
QmmRun qmm_run(const QmmConfig& cfg, const std::vector<int>& record_times, int series_stride = 100);

/// Header line "t,S,sigma,log10X", one value line, then "F,psi_density" rows.
void write_snapshot_csv(std::ostream& out, const FrequencyState& state, const QmmConfig& cfg, int j);
void write_series_csv(std::ostream& out, const std::vector<QmmSeriesPoint>& series);

}  // namespace gumbel

#endif  // GUMBEL_QMM_HPP
