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


#include "gumbel/qmm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gumbel/io.hpp"
#include "gumbel/numeric.hpp"

namespace gumbel {

namespace {

constexpr double kInflowCutoff = 40.0;
constexpr double kNormalizationWindow = 50.0;

// Normalizes log_psi in place and refreshes S and σ from the classes within
// the normalization window of the maximum.
void normalize(FrequencyState& s) {
  const Eigen::Index n = s.log_psi.size();
  const double m = s.log_psi.maxCoeff();
  const double floor = m - kNormalizationWindow;
  KahanSum z;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (s.log_psi[i] > floor) z += std::exp(s.log_psi[i] - m);
  }
  const double lz = m + std::log(z.value());
  s.log_psi -= lz;
  KahanSum mean;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (s.log_psi[i] > floor - lz) mean += std::exp(s.log_psi[i] + s.log_f[i]);
  }
  s.S = mean.value();
  KahanSum var;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (s.log_psi[i] > floor - lz) {
      const double d = std::exp(s.log_f[i]) - s.S;
      var += std::exp(s.log_psi[i]) * d * d;
    }
  }
  s.sigma = std::sqrt(var.value());
}

}  // namespace

void validate(const QmmConfig& cfg) {
  if (!(cfg.alpha > 0.0 && std::isfinite(cfg.alpha))) throw std::invalid_argument("alpha must be positive");
  if (!(cfg.c > 0.0 && std::isfinite(cfg.c))) throw std::invalid_argument("c must be positive");
  if (!(cfg.beta > 0.0 && cfg.beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
  if (!std::isfinite(cfg.logX0)) throw std::invalid_argument("logX0 must be finite");
  if (cfg.horizon < 0) throw std::invalid_argument("horizon must be >= 0");
  if (cfg.k_limit < 1) throw std::invalid_argument("k_limit must be >= 1");
}

double FrequencyState::psi(long long k) const {
  if (k < k_min || k > k_max) return 0.0;
  return std::exp(log_psi[static_cast<Eigen::Index>(k - k_min)]);
}

FrequencyState qmm_init(const QmmConfig& cfg) {
  validate(cfg);
  FrequencyState s;
  s.log_psi = Eigen::ArrayXd::Zero(1);
  s.log_f = Eigen::ArrayXd::Constant(1, cfg.grid().log_grid_point(1));
  s.logX = cfg.logX0;
  s.S = cfg.grid().grid_point(1);
  s.sigma = 0.0;
  return s;
}

void qmm_step(FrequencyState& s, const QmmConfig& cfg) {
  const DiscreteStretched grid = cfg.grid();
  const double log_beta = std::log(cfg.beta);
  const double log_S = std::log(s.S);
  const double next_logX = s.logX + log_S;

  s.log_psi += std::log1p(-cfg.beta) - log_S + s.log_f;

  long long k_max = s.k_max;
  while (log_beta + next_logX + grid.log_mass(k_max + 1) > 0.0) {
    ++k_max;
    if (k_max > cfg.k_limit) throw std::length_error("qmm window passed k_limit");
  }
  if (k_max > s.k_max) {
    const Eigen::Index old = s.log_psi.size();
    const Eigen::Index n = static_cast<Eigen::Index>(k_max - s.k_min + 1);
    s.log_psi.conservativeResize(n);
    s.log_f.conservativeResize(n);
    for (Eigen::Index i = old; i < n; ++i) {
      s.log_psi[i] = -kInf;
      s.log_f[i] = grid.log_grid_point(s.k_min + i);
    }
    s.k_max = k_max;
  }

  for (Eigen::Index i = 0; i < s.log_psi.size(); ++i) {
    const long long k = s.k_min + i;
    const double inflow = log_beta + grid.log_mass(k);
    if (log_beta + next_logX + grid.log_mass(k) <= 0.0) continue;
    if (inflow > s.log_psi[i] - kInflowCutoff) s.log_psi[i] = log_add_exp(s.log_psi[i], inflow);
  }

  normalize(s);
  s.logX = next_logX;
  ++s.t;
}

std::vector<DensityPoint> density(const FrequencyState& s, const QmmConfig& cfg, int j) {
  if (j < 1) throw std::invalid_argument("half bin must be >= 1");
  const DiscreteStretched grid = cfg.grid();
  std::vector<DensityPoint> out;
  const Eigen::ArrayXd psi = s.log_psi.exp();
  const Eigen::Index n = psi.size();
  for (Eigen::Index c = j; c + j < n; ++c) {
    const double mass = psi.segment(c - j, 2 * j + 1).sum();
    if (mass <= 0.0) continue;
    const long long k = s.k_min + c;
    const double width = grid.grid_point(k + j) - grid.grid_point(k - j);
    out.push_back({grid.grid_point(k), mass / width, width});
  }
  return out;
}

double density_mass(const FrequencyState& s, const QmmConfig& cfg, int j) {
  if (j < 1) throw std::invalid_argument("half bin must be >= 1");
  const DiscreteStretched grid = cfg.grid();
  const Eigen::ArrayXd psi = s.log_psi.exp();
  const Eigen::Index n = psi.size();
  KahanSum total;
  for (Eigen::Index c = j; c + j < n; c += 2 * j + 1) {
    const long long k = s.k_min + c;
    const double width = grid.grid_point(k + j) - grid.grid_point(k - j);
    total += psi.segment(c - j, 2 * j + 1).sum() / width * width;
  }
  return total.value();
}

std::pair<Eigen::ArrayXd, Eigen::ArrayXd> standardized_density(const FrequencyState& s, const QmmConfig& cfg,
                                                               int j) {
  const auto pts = density(s, cfg, j);
  Eigen::ArrayXd F(static_cast<Eigen::Index>(pts.size()));
  Eigen::ArrayXd psi(F.size());
  for (Eigen::Index i = 0; i < F.size(); ++i) {
    F[i] = pts[static_cast<std::size_t>(i)].F;
    psi[i] = pts[static_cast<std::size_t>(i)].psi;
  }
  return standardized_density(F, psi, s.S, s.sigma);
}

Efd efd_from_state(const FrequencyState& s, const QmmConfig&) {
  return efd_from_log_weights(s.log_f.exp(), s.log_psi, "qmm");
}

QmmRun qmm_run(const QmmConfig& cfg, const std::vector<int>& record_times, int series_stride) {
  validate(cfg);
  if (series_stride < 1) throw std::invalid_argument("series stride must be >= 1");
  std::vector<int> times = record_times;
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  for (int t : times) {
    if (t < 0 || t > cfg.horizon) throw std::invalid_argument("record time outside [0, horizon]");
  }
  QmmRun run;
  FrequencyState s = qmm_init(cfg);
  auto next = times.begin();
  for (;;) {
    const bool snap = next != times.end() && *next == s.t;
    if (snap) {
      run.snapshots.push_back(s);
      ++next;
    }
    if (snap || s.t % series_stride == 0 || s.t == cfg.horizon) {
      run.series.push_back({s.t, s.S, s.sigma, s.logX, s.k_max});
    }
    if (s.t == cfg.horizon) break;
    qmm_step(s, cfg);
  }
  return run;
}

void write_snapshot_csv(std::ostream& out, const FrequencyState& s, const QmmConfig& cfg, int j) {
  out << "t,S,sigma,log10X\n"
      << s.t << ',' << format_double(s.S) << ',' << format_double(s.sigma) << ','
      << format_double(s.logX / std::numbers::ln10) << '\n';
  out << "F,psi_density\n";
  for (const auto& p : density(s, cfg, j)) out << format_double(p.F) << ',' << format_double(p.psi) << '\n';
}

void write_series_csv(std::ostream& out, const std::vector<QmmSeriesPoint>& series) {
  out << "t,S,sigma,log10X,k_max\n";
  for (const auto& p : series) {
    out << p.t << ',' << format_double(p.S) << ',' << format_double(p.sigma) << ','
        << format_double(p.logX / std::numbers::ln10) << ',' << p.k_max << '\n';
  }
}

}  // namespace gumbel
