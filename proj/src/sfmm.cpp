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


#include "gumbel/sfmm.hpp"

#include <cmath>
#include <stdexcept>

#include "gumbel/io.hpp"

namespace gumbel {

void validate(const SfmmConfig& cfg) {
  validate(TailSpec{cfg.tail});
  if (!(cfg.tail.n == 1 || (cfg.tail.n == 2 && cfg.tail.alpha < 1.0))) {
    throw std::invalid_argument("the SFMM is defined only for n = 1 or n = 2 with alpha < 1");
  }
  if (!(cfg.beta > 0.0 && cfg.beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
  if (cfg.horizon < 0) throw std::invalid_argument("horizon must be >= 0");
  if (cfg.switch_threshold < 1 || cfg.low_theta_switch < 1) {
    throw std::invalid_argument("switch thresholds must be >= 1");
  }
  for (int t : cfg.record_times) {
    if (t < 0 || t > cfg.horizon) throw std::invalid_argument("record time outside [0, horizon]");
  }
}

double sfmm_theta(const SfmmConfig& cfg, int k) {
  auto lu = try_log_u_n(cfg.tail, static_cast<double>(k));
  if (!lu) return 1.0;
  return (1.0 - cfg.beta) * std::exp(*lu);
}

SfmmRun run_sfmm(const SfmmConfig& cfg) {
  validate(cfg);
  SfmmRun run;
  run.families.reserve(static_cast<std::size_t>(cfg.horizon) + 1);
  for (int k = 0; k <= cfg.horizon; ++k) {
    SfmmFamily fam;
    fam.k = k;
    fam.theta = sfmm_theta(cfg, k);
    fam.fitness = fam.theta / (1.0 - cfg.beta);
    GwConfig g;
    g.theta = fam.theta;
    g.horizon = cfg.horizon - k;
    g.switch_threshold = fam.theta <= cfg.low_theta ? cfg.low_theta_switch : cfg.switch_threshold;
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(k)));
    fam.path = gw_simulate_compact(g, rng);
    run.families.push_back(std::move(fam));
  }
  const std::vector<int> times = cfg.record_times.empty() ? std::vector<int>{cfg.horizon} : cfg.record_times;
  for (int t : times) run.summaries.push_back(sfmm_summary(run, t));
  return run;
}

SfmmSummary sfmm_summary(const SfmmRun& run, int t) {
  if (t < 0 || static_cast<std::size_t>(t) >= run.families.size()) {
    throw std::out_of_range("sfmm_summary: generation outside the simulated horizon");
  }
  const auto m = static_cast<Eigen::Index>(t) + 1;
  Eigen::ArrayXd f(m), lw(m);
  SfmmSummary s;
  s.t = t;
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto& fam = run.families[static_cast<std::size_t>(k)];
    f(k) = fam.fitness;
    lw(k) = fam.path.size_at(t - fam.k).log();
    if (lw(k) > -kInf) ++s.alive;
  }
  s.log_X = log_sum_exp(std::span<const double>(lw.data(), static_cast<std::size_t>(m)));
  s.efd = efd_from_log_weights(f, lw, "sfmm");
  s.S = s.efd.S;
  s.sigma = s.efd.sigma;
  return s;
}

void write_family_csv(std::ostream& out, const SfmmRun& run) {
  out << "k,theta_k,switch_time,alive\n";
  for (const auto& fam : run.families) {
    out << fam.k << ',' << format_double(fam.theta) << ',';
    if (fam.path.switch_time) out << fam.k + *fam.path.switch_time;
    out << ',' << (fam.path.extinct() ? 0 : 1) << '\n';
  }
}

}  // namespace gumbel
