//
// Copyright 2026 The Privacy HCR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef PRIVACY_HCR_RNG_H_
#define PRIVACY_HCR_RNG_H_

#include <cstdint>
#include <random>

namespace privacy_hcr {

// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t MixBits(std::uint64_t x);

// Seed of the index-th independent stream under `master_seed`. Depends only
// on (master_seed, index), so trials can be generated in any order.
std::uint64_t SubstreamSeed(std::uint64_t master_seed, std::uint64_t index);

using Engine = std::mt19937_64;

Engine MakeEngine(std::uint64_t seed);

// Standard normal draw via the Box-Muller transform. Used instead of
// std::normal_distribution so the noise stream is identical across standard
// library implementations.
double StandardNormal(Engine& engine);

}  // namespace privacy_hcr

#endif  // PRIVACY_HCR_RNG_H_
