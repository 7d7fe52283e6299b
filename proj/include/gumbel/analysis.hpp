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


#ifndef GUMBEL_ANALYSIS_HPP
#define GUMBEL_ANALYSIS_HPP

#include <Eigen/Core>
#include <ostream>
#include <string>
#include <vector>

#include "gumbel/tails.hpp"

namespace gumbel {

struct Population;
struct WaveProfile;
struct TrajectoryRecord;

/// Empirical fitness distribution: Ψ(f) = weight at or below f.
struct Efd {
  Eigen::ArrayXd f;
  /// Cumulative normalized weight at each f, ending at 1.
  Eigen::ArrayXd cum;
  double S = 0.0;
  double sigma = 0.0;
  std::string source;

  bool empty() const { return f.size() == 0; }
  /// Right-continuous Ψ(x); the empty convention gives Θ(x).
  double cdf(double x) const;
};

/// Weighted EFD from fitness values and log weights (any order, ties merged).
Efd efd_from_log_weights(const Eigen::ArrayXd& f, const Eigen::ArrayXd& log_w, std::string source);
Efd efd_from_population(const Population& pop);
Efd efd_from_profile(const WaveProfile& wp);

struct StandardizedWave {
  Eigen::ArrayXd y;
  Eigen::ArrayXd Psi;
  double v = 0.0;
  double s = 0.0;
};

/// 161 points on [-4, 4].
Eigen::ArrayXd default_y_grid();

/// Ψ(v + s y) on the grid; throws std::invalid_argument unless s > 0.
StandardizedWave standardized_wave(const Efd& efd, double v, double s, const Eigen::ArrayXd& y);
inline StandardizedWave standardized_wave(const Efd& efd, double v, double s) {
  return standardized_wave(efd, v, s, default_y_grid());
}

/// sup_y |Ψ_std(y) - Υ(y)| over the grid points with |y| ≤ 4.
double ks_to_gaussian(const StandardizedWave& w);

/// σ ψ(S + σ y) for a density given at points F; returns (y, value).
std::pair<Eigen::ArrayXd, Eigen::ArrayXd> standardized_density(const Eigen::ArrayXd& F, const Eigen::ArrayXd& psi,
                                                               double S, double sigma);

/// sup over points with |y| ≤ y_max of |g(y) - Υ'(y)|; NaN when there are none.
double density_sup_error(const Eigen::ArrayXd& y, const Eigen::ArrayXd& g, double y_max = 3.0);

struct GrowthRow {
  double t = 0.0;
  double statistic = 0.0;
  double target = 0.0;
  double w_statistic = 0.0;
  double w_target = 0.0;
};

/// Normalized growth statistics; rows where the formulas are undefined are skipped.
std::vector<GrowthRow> growth_exponents(const std::vector<TrajectoryRecord>& records, const TailSpec& spec);

struct SlopeFit {
  double slope = 0.0;
  double stderr_ = 0.0;
  double intercept = 0.0;
  int points = 0;
};

/// Least-squares slope of log σ against log t. Requires ≥ 10 points spanning
/// a decade; drops the first burn_in fraction of the time range.
SlopeFit width_exponent(const std::vector<double>& t, const std::vector<double>& sigma, double burn_in = 0.1);

/// P(Binomial(n, p) ≥ k).
double binomial_upper_tail(long long k, long long n, double p);

struct Verdict {
  std::string name;
  double statistic = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

void write_verdicts_json(std::ostream& out, const std::vector<Verdict>& verdicts);
void write_standardized_csv(std::ostream& out, const StandardizedWave& w);

}  // namespace gumbel

#endif  // GUMBEL_ANALYSIS_HPP
