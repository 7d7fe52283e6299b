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


#ifndef GUMBEL_ENGINE_HPP
#define GUMBEL_ENGINE_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gumbel/log_real.hpp"
#include "gumbel/random.hpp"
#include "gumbel/tails.hpp"

namespace gumbel {

enum class ModelVariant { kFmm, kMmm };

std::string to_string(ModelVariant v);
ModelVariant parse_variant(const std::string& s);

struct ModelParams {
  double beta = 0.01;
  TailSpec tail = TypeI{};
  ModelVariant variant = ModelVariant::kFmm;
  std::uint64_t seed = 1;
  std::size_t family_cap = 100000;
  /// Families larger than this grow deterministically.
  double exact_cap = 1e6;
  /// MMM: mutant clouds larger than this are represented by their top_k
  /// order statistics plus a deterministic bulk.
  double individual_mutant_cap = 1e4;
  int top_k = 64;
  int bulk_bins = 64;
};

void validate(const ModelParams& p);

struct Family {
  double fitness = 0.0;
  LogReal abundance;
};

struct PopulationStats {
  LogReal X;
  LogReal Xi;
  /// Largest mutant fitness of the generation, 0 when there was none.
  double W = 0.0;
  double Q = 0.0;
  double S = 0.0;
  double sigma = 0.0;
};

struct ApproximationFlags {
  std::uint64_t merged_families = 0;
  std::uint64_t deterministic_family_steps = 0;
  std::uint64_t mmm_bulk_generations = 0;
  std::uint64_t dropped_zero_fitness_mutants = 0;
  bool any() const {
    return merged_families || deterministic_family_steps || mmm_bulk_generations ||
           dropped_zero_fitness_mutants;
  }
};

struct Population {
  /// Sorted by increasing fitness, distinct fitnesses, positive abundances.
  std::vector<Family> families;
  int t = 0;
  PopulationStats stats;
  ApproximationFlags flags;

  bool extinct() const { return families.empty(); }
  void recompute_stats();

  static Population from_families(std::vector<Family> families);
  static Population single(double fitness, double count);
};

/// One generation by Poisson thinning.
Population step(const Population& pop, const ModelParams& params, Rng& rng);

/// Fittest of N offspring, each a mutant with probability β; empty when no
/// mutant is present. Exact for any N through log Z / N.
std::optional<double> fittest_mutant(LogReal N, double beta, const TailSpec& tail, Rng& rng);

struct TrajectoryRecord {
  int t = 0;
  double log_X = 0.0;
  double log_Xi = 0.0;
  double W = 0.0;
  double Q = 0.0;
  double S = 0.0;
  double sigma = 0.0;
  bool extinct = false;
};

struct StopConditions {
  /// Stop once log X exceeds this value.
  double max_log_X = kInf;
};

struct Trajectory {
  ModelParams params;
  std::vector<TrajectoryRecord> records;
  std::string termination;
  ApproximationFlags flags;
};

Trajectory run(const ModelParams& params, const Population& initial, int horizon,
               const StopConditions& stop = {});

struct SurvivalEstimate {
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 1.0;
  int survivors = 0;
  int replicas = 0;
};

/// Wilson score interval at the given two-sided z.
SurvivalEstimate wilson_interval(int successes, int trials, double z = 1.959963984540054);

/// A replica survives when log X passes log(exact_cap) + 10 before horizon.
SurvivalEstimate survival_probability(const ModelParams& params, const Population& initial, int replicas,
                                      int horizon);

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace gumbel

#endif  // GUMBEL_ENGINE_HPP
