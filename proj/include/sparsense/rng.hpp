// Copyright 2026 The sparsense Authors
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

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace sparsense {

struct RngSeed {
  std::uint64_t value = 0;

  friend bool operator==(RngSeed, RngSeed) = default;
};

// All randomness in the library comes from std::mt19937_64 engines keyed by
// std::seed_seq over (seed, stream words...). Distinct stream words give
// statistically independent engines, so e.g. every matrix column and every
// (trial, role) pair owns its own stream.
using Engine = std::mt19937_64;

Engine make_engine(RngSeed seed, std::initializer_list<std::uint64_t> stream);

/// First output of make_engine(seed, stream), used to hand a child seed to
/// operations that take an RngSeed.
RngSeed derive_seed(RngSeed seed, std::initializer_list<std::uint64_t> stream);

}  // namespace sparsense
