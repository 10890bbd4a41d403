// Copyright 2026 The weakcollapse Authors
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

#pragma once

#include <cstdint>
#include <random>

namespace weakcollapse {

// Per-trial random stream. std::mt19937_64 is fully specified by the
// standard, so streams are identical across platforms; the helpers below
// avoid the implementation-defined std:: distributions for the same reason.
using Rng = std::mt19937_64;

/// Seed for trial `index` under `master`. Trials seeded this way produce the
/// same records whether they run serially or in parallel.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

inline Rng trial_rng(std::uint64_t master, std::uint64_t index) {
  return Rng(derive_seed(master, index));
}

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(Rng& rng) noexcept;

/// Uniform double in (0, 1); never returns an endpoint.
double uniform_open01(Rng& rng) noexcept;

/// Uniform integer in [0, n). Requires n > 0.
std::uint64_t uniform_index(Rng& rng, std::uint64_t n) noexcept;

/// Standard normal variate (Box-Muller, one value per call).
double standard_normal(Rng& rng) noexcept;

}  // namespace weakcollapse
