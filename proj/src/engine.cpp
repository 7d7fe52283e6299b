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


#include "gumbel/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gumbel/io.hpp"
#include "gumbel/numeric.hpp"

namespace gumbel {

std::string to_string(ModelVariant v) { return v == ModelVariant::kFmm ? "FMM" : "MMM"; }

ModelVariant parse_variant(const std::string& s) {
  if (s == "FMM" || s == "fmm") return ModelVariant::kFmm;
  if (s == "MMM" || s == "mmm") return ModelVariant::kMmm;
  throw std::invalid_argument("unknown model variant '" + s + "' (expected FMM or MMM)");
}

void validate(const ModelParams& p) {
  if (!(p.beta > 0.0 && p.beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
  validate(p.tail);
  if (p.family_cap < 1) throw std::invalid_argument("family_cap must be >= 1");
  if (!(p.exact_cap >= 1.0)) throw std::invalid_argument("exact_cap must be >= 1");
  if (p.top_k < 1 || p.bulk_bins < 1) throw std::invalid_argument("top_k and bulk_bins must be >= 1");
  if (!(p.individual_mutant_cap >= p.top_k)) {
    throw std::invalid_argument("individual_mutant_cap must be >= top_k");
  }
}

void Population::recompute_stats() {
  stats.X = LogReal::zero();
  stats.Q = 0.0;
  stats.S = 0.0;
  stats.sigma = 0.0;
  if (families.empty()) return;
  std::vector<double> logs;
  logs.reserve(families.size());
  for (const auto& f : families) logs.push_back(f.abundance.log());
  const double lx = log_sum_exp(logs);
  stats.X = LogReal::from_log(lx);
  stats.Q = families.back().fitness;
  KahanSum mean;
  for (const auto& f : families) mean += std::exp(f.abundance.log() - lx) * f.fitness;
  stats.S = mean.value();
  KahanSum var;
  for (const auto& f : families) {
    const double d = f.fitness - stats.S;
    var += std::exp(f.abundance.log() - lx) * d * d;
  }
  stats.sigma = std::sqrt(std::max(0.0, var.value()));
}

namespace {

void normalize_families(std::vector<Family>& fams) {
  std::erase_if(fams, [](const Family& f) { return f.abundance.is_zero(); });
  std::sort(fams.begin(), fams.end(), [](const Family& a, const Family& b) { return a.fitness < b.fitness; });
  std::vector<Family> out;
  out.reserve(fams.size());
  for (const auto& f : fams) {
    if (!out.empty() && out.back().fitness == f.fitness) {
      out.back().abundance += f.abundance;
    } else {
      out.push_back(f);
    }
  }
  fams.swap(out);
}

void enforce_cap(std::vector<Family>& fams, std::size_t cap, ApproximationFlags& flags) {
  if (fams.size() <= cap) return;
  const std::size_t k = fams.size() - cap + 1;
  std::vector<double> logs;
  for (std::size_t i = 0; i < k; ++i) logs.push_back(fams[i].abundance.log());
  const double lx = log_sum_exp(logs);
  KahanSum mean;
  for (std::size_t i = 0; i < k; ++i) mean += std::exp(fams[i].abundance.log() - lx) * fams[i].fitness;
  Family agg{mean.value(), LogReal::from_log(lx)};
  fams.erase(fams.begin(), fams.begin() + static_cast<std::ptrdiff_t>(k));
  fams.insert(fams.begin(), agg);
  flags.merged_families += k - 1;
  normalize_families(fams);
}

// log(1 - e^{x}) for x < 0, accurate when |x| underflows relative to 1.
double log1m_exp_from_log_neg(double log_neg_x) {
  if (log_neg_x < -30.0) return log_neg_x;
  return std::log(-std::expm1(-std::exp(log_neg_x)));
}

}  // namespace

Population Population::from_families(std::vector<Family> families) {
  Population p;
  for (const auto& f : families) {
    if (!(f.fitness > 0.0)) throw std::invalid_argument("family fitness must be positive");
  }
  normalize_families(families);
  p.families = std::move(families);
  p.recompute_stats();
  p.stats.Xi = p.stats.X;
  return p;
}

Population Population::single(double fitness, double count) {
  return from_families({Family{fitness, LogReal::from_linear(count)}});
}

std::optional<double> fittest_mutant(LogReal N, double beta, const TailSpec& tail, Rng& rng) {
  if (N.is_zero()) return std::nullopt;
  const double log_z = std::log(uniform01(rng));
  // Z ≤ (1-β)^N means no mutant among the N offspring.
  const double log_neg = std::log(-log_z) - N.log();  // log(-log Z / N)
  const double lzn = -std::exp(log_neg);
  if (lzn <= std::log1p(-beta)) return std::nullopt;
  const double log_g = std::min(0.0, log1m_exp_from_log_neg(log_neg) - std::log(beta));
  return tail_quantile_log(tail, log_g);
}

Population step(const Population& pop, const ModelParams& params, Rng& rng) {
  Population next;
  next.t = pop.t + 1;
  next.flags = pop.flags;
  if (pop.extinct()) {
    next.recompute_stats();
    next.stats.Xi = LogReal::zero();
    return next;
  }
  const double log_keep = std::log1p(-params.beta);
  const double log_cap = std::log(params.exact_cap);
  const double log_limit = std::log(kPoissonMeanLimit);

  std::vector<double> log_weights;
  log_weights.reserve(pop.families.size());
  for (const auto& f : pop.families) log_weights.push_back(std::log(f.fitness) + f.abundance.log());
  const double log_lambda = log_sum_exp(log_weights);

  std::vector<Family> fams;
  fams.reserve(pop.families.size() + 1);
  LogReal xi = LogReal::zero();
  for (std::size_t i = 0; i < pop.families.size(); ++i) {
    const double log_mean = log_keep + log_weights[i];
    LogReal a;
    if (pop.families[i].abundance.log() > log_cap || log_mean > log_limit) {
      a = LogReal::from_log(log_mean);
      ++next.flags.deterministic_family_steps;
    } else {
      const auto n = poisson(rng, std::exp(log_mean));
      a = n == 0 ? LogReal::zero() : LogReal::from_linear(static_cast<double>(n));
    }
    xi += a;
    if (!a.is_zero()) fams.push_back({pop.families[i].fitness, a});
  }

  const double log_mut_mean = std::log(params.beta) + log_lambda;
  LogReal m;
  bool m_exact = true;
  if (log_mut_mean > log_limit) {
    m = LogReal::from_log(log_mut_mean);
    m_exact = false;
  } else {
    const auto k = poisson(rng, std::exp(log_mut_mean));
    m = k == 0 ? LogReal::zero() : LogReal::from_linear(static_cast<double>(k));
  }
  xi += m;

  double w = 0.0;
  auto add_mutant = [&](double f, LogReal count) {
    if (f > 0.0 && std::isfinite(f)) {
      fams.push_back({f, count});
    } else {
      ++next.flags.dropped_zero_fitness_mutants;
    }
  };
  if (!m.is_zero()) {
    if (params.variant == ModelVariant::kFmm) {
      w = *fittest_mutant(m, 1.0, params.tail, rng);
      add_mutant(w, LogReal::one());
    } else if (m_exact && m.linear() <= params.individual_mutant_cap) {
      const auto count = static_cast<long long>(std::llround(m.linear()));
      for (long long i = 0; i < count; ++i) {
        const double f = sample_fitness(params.tail, rng);
        w = std::max(w, f);
        add_mutant(f, LogReal::one());
      }
    } else {
      ++next.flags.mmm_bulk_generations;
      double log_one_minus_v = 0.0;
      for (int k = 0; k < params.top_k; ++k) {
        const double log_remaining = m.log() + std::log1p(-static_cast<double>(k) * std::exp(-m.log()));
        log_one_minus_v += std::log(uniform01(rng)) * std::exp(-log_remaining);
        const double log_v = log1m_exp_from_log_neg(std::log(-log_one_minus_v));
        const double f = tail_quantile_log(params.tail, std::min(0.0, log_v));
        if (k == 0) w = f;
        add_mutant(f, LogReal::one());
      }
      const double v_k = -std::expm1(log_one_minus_v);
      const double log_bulk = m.log() + std::log1p(-static_cast<double>(params.top_k) * std::exp(-m.log())) -
                              std::log(static_cast<double>(params.bulk_bins));
      for (int j = 0; j < params.bulk_bins; ++j) {
        const double v = v_k + (1.0 - v_k) * (j + 0.5) / params.bulk_bins;
        add_mutant(tail_quantile_log(params.tail, std::log(v)), LogReal::from_log(log_bulk));
      }
    }
  }

  normalize_families(fams);
  enforce_cap(fams, params.family_cap, next.flags);
  next.families = std::move(fams);
  next.recompute_stats();
  next.stats.Xi = xi;
  next.stats.W = w;
  return next;
}

namespace {

TrajectoryRecord record_of(const Population& p) {
  return {p.t, p.stats.X.log(), p.stats.Xi.log(), p.stats.W, p.stats.Q, p.stats.S, p.stats.sigma, p.extinct()};
}

}  // namespace

Trajectory run(const ModelParams& params, const Population& initial, int horizon, const StopConditions& stop) {
  validate(params);
  if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
  Trajectory traj;
  traj.params = params;
  Rng rng(params.seed);
  Population pop = initial;
  traj.records.push_back(record_of(pop));
  traj.termination = "horizon";
  if (pop.extinct()) {
    traj.termination = "extinct";
  } else if (pop.stats.X.log() > stop.max_log_X) {
    traj.termination = "escape";
  } else {
    for (int t = 0; t < horizon; ++t) {
      pop = step(pop, params, rng);
      traj.records.push_back(record_of(pop));
      if (pop.extinct()) {
        traj.termination = "extinct";
        break;
      }
      if (pop.stats.X.log() > stop.max_log_X) {
        traj.termination = "escape";
        break;
      }
    }
  }
  traj.flags = pop.flags;
  return traj;
}

SurvivalEstimate wilson_interval(int successes, int trials, double z) {
  SurvivalEstimate e;
  e.survivors = successes;
  e.replicas = trials;
  if (trials <= 0) return e;
  const double n = trials;
  const double p = successes / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  e.estimate = p;
  e.lower = std::max(0.0, centre - half);
  e.upper = std::min(1.0, centre + half);
  return e;
}

SurvivalEstimate survival_probability(const ModelParams& params, const Population& initial, int replicas,
                                      int horizon) {
  if (replicas < 1) throw std::invalid_argument("replicas must be >= 1");
  StopConditions stop;
  stop.max_log_X = std::log(params.exact_cap) + 10.0;
  int survivors = 0;
  for (int r = 0; r < replicas; ++r) {
    ModelParams p = params;
    p.seed = derive_seed(params.seed, static_cast<std::uint64_t>(r));
    const Trajectory traj = run(p, initial, horizon, stop);
    if (traj.termination == "escape") ++survivors;
  }
  return wilson_interval(survivors, replicas);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,log10_X,log10_Xi,W,Q,S,sigma,extinct\n";
  for (const auto& r : traj.records) {
    out << r.t << ',' << format_double(r.log_X / std::numbers::ln10) << ','
        << format_double(r.log_Xi / std::numbers::ln10) << ',' << format_double(r.W) << ','
        << format_double(r.Q) << ',' << format_double(r.S) << ',' << format_double(r.sigma) << ','
        << (r.extinct ? 1 : 0) << '\n';
  }
}

}  // namespace gumbel
