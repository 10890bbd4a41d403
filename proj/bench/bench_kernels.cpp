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

// Wall-clock comparison of the OpenMP kernels against their serial reference
// implementations. Each pair must also agree on its result; a mismatch exits
// nonzero.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <omp.h>

#include "weakcollapse/ks.hpp"
#include "weakcollapse/parallel.hpp"
#include "weakcollapse/policy.hpp"
#include "weakcollapse/random_quantum.hpp"
#include "weakcollapse/sat.hpp"

namespace {

using namespace weakcollapse;

template <class Fn>
double best_of(int reps, Fn&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt < best) best = dt;
  }
  return best;
}

bool report(const char* name, double serial, double parallel, bool same) {
  std::printf("%-28s serial %9.4f s   parallel %9.4f s   speedup %5.2fx   %s\n", name, serial, parallel,
              serial / parallel, same ? "match" : "MISMATCH");
  return same;
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::atoi(argv[1]) : 3;
  std::printf("OpenMP threads: %d, best of %d\n", omp_get_max_threads(), reps);
  bool ok = true;

  {
    const auto table = ks::builtin_ks_table();
    ks::ColoringResult a, b;
    const double s = best_of(reps, [&] { a = ks::ks_coloring_search_serial(table); });
    const double p = best_of(reps, [&] { b = ks::ks_coloring_search(table); });
    ok &= report("ks coloring search", s, p,
                 a.assignments_found == b.assignments_found && a.search_space_size == b.search_space_size);
  }
  {
    const ks::FwtProtocol protocol(ks::builtin_ks_table());
    const ks::FwtSettings settings{std::nullopt, std::nullopt, ks::RaySelection::Any};
    ks::FwtSummary a, b;
    const CollapsePolicy born = BornPolicy{};
    const double s = best_of(reps, [&] {
      a = ks::fwt_experiment(protocol, settings, born, 100000, 7, Execution::Serial);
    });
    const double p = best_of(reps, [&] {
      b = ks::fwt_experiment(protocol, settings, born, 100000, 7, Execution::Parallel);
    });
    ok &= report("fwt trials (1e5)", s, p,
                 a.agreements == b.agreements &&
                     a.out_of_context_detections == b.out_of_context_detections);
  }
  {
    auto batch = [](std::uint64_t, Rng& rng) {
      const auto f = sat::random_oracle(10, 1.0 / 1024.0, rng);
      const auto r = sat::decide_sat(f, rng);
      return r.witness.value_or(~std::uint64_t{0});
    };
    std::vector<std::uint64_t> a, b;
    const double s = best_of(reps, [&] { a = run_trials_serial(2000, 11, batch); });
    const double p = best_of(reps, [&] { b = run_trials(2000, 11, batch); });
    ok &= report("sat decide (2000 x n=10)", s, p, a == b);
  }
  {
    Rng setup(3);
    const auto state = random_state(64, setup);
    const auto m = random_basis_measurement(64, setup);
    auto draw = [&](std::uint64_t, Rng& rng) {
      CollapsePolicy born = BornPolicy{};
      return sample_outcome(born, state, m, rng).outcome;
    };
    std::vector<std::size_t> a, b;
    const double s = best_of(reps, [&] { a = run_trials_serial(100000, 5, draw); });
    const double p = best_of(reps, [&] { b = run_trials(100000, 5, draw); });
    ok &= report("born sampling (1e5, d=64)", s, p, a == b);
  }
  return ok ? 0 : 1;
}
