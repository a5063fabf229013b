// Copyright 2026 The bli Authors
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

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace bli {

// Deterministic random stream. Every draw is derived from raw mt19937_64
// output so results do not depend on the standard library's distribution
// implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform();

  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  // Uniformly random permutation of 0..n-1 (Fisher-Yates).
  std::vector<int> permutation(int n);

  // Draws k distinct indices from 0..n-1 uniformly, returned in draw order.
  std::vector<int> sample_without_replacement(int n, int k);

  // Independent child stream keyed by `index`.
  Rng substream(std::uint64_t index) const;

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

// SplitMix64 finalizer; used to derive substream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace bli
