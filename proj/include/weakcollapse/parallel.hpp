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

// Trial runners. Every trial gets its own stream derived from
// (master_seed, trial_index), so the OpenMP runner and the serial reference
// runner return identical result vectors. The serial runner is kept as the
// reference for tests and for the benchmark.

#include <cstdint>
#include <exception>
#include <utility>
#include <vector>

#include "weakcollapse/rng.hpp"

namespace weakcollapse {

enum class Execution { Serial, Parallel };

template <class Fn>
auto run_trials_serial(std::uint64_t count, std::uint64_t master_seed, Fn&& fn) {
  using Result = decltype(fn(std::uint64_t{}, std::declval<Rng&>()));
  std::vector<Result> results;
  results.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    Rng rng = trial_rng(master_seed, i);
    results.push_back(fn(i, rng));
  }
  return results;
}

template <class Fn>
auto run_trials(std::uint64_t count, std::uint64_t master_seed, Fn&& fn) {
  using Result = decltype(fn(std::uint64_t{}, std::declval<Rng&>()));
  std::vector<Result> results(count);
  std::exception_ptr failure;
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      Rng rng = trial_rng(master_seed, static_cast<std::uint64_t>(i));
      results[i] = fn(static_cast<std::uint64_t>(i), rng);
    } catch (...) {
#pragma omp critical(weakcollapse_trial_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

template <class Fn>
auto run_trials(Execution exec, std::uint64_t count, std::uint64_t master_seed, Fn&& fn) {
  if (exec == Execution::Serial) return run_trials_serial(count, master_seed, std::forward<Fn>(fn));
  return run_trials(count, master_seed, std::forward<Fn>(fn));
}

}  // namespace weakcollapse
