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


#ifndef GUMBEL_RANDOM_HPP
#define GUMBEL_RANDOM_HPP

#include <cstdint>
#include <random>

namespace gumbel {

using Rng = std::mt19937_64;

/// Uniform draw on the open interval (0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Independent stream seed for replica or family `index` under `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Largest Poisson mean the exact sampler accepts.
inline constexpr double kPoissonMeanLimit = 2147483648.0;

/// Exact Poisson(mean) draw. Inversion below mean 10, transformed rejection
/// (PTRS) above. Throws std::overflow_error past kPoissonMeanLimit and
/// std::domain_error for a negative or NaN mean.
std::uint64_t poisson(Rng& rng, double mean);

}  // namespace gumbel

#endif  // GUMBEL_RANDOM_HPP
