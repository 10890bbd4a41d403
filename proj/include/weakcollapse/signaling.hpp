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

// Bob's marginal statistics as a function of Alice's setting, and how much
// classical information those marginals can carry. Under Born policies the
// marginals never depend on Alice's setting; a deviating policy on an
// entangled state turns the setting into a channel.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "weakcollapse/parallel.hpp"
#include "weakcollapse/policy.hpp"
#include "weakcollapse/quantum.hpp"

namespace weakcollapse {

struct AliceSetting {
  std::string label;
  ProjectiveMeasurement measurement;  // on Alice's factor
  CollapsePolicy policy;
};

enum class SignalingMode { Analytic, Empirical };

struct SignalingReport {
  std::vector<std::string> labels;
  std::vector<ProbabilityDistribution> bob_marginals;  // one per setting, same order
  double max_tv = 0.0;
  double channel_bits = 0.0;
  std::uint64_t trials_per_setting = 0;  // 0 in analytic mode
  SignalingMode mode = SignalingMode::Analytic;
};

/// sum_j q_j Born(Bob | Alice outcome j), with q the effective distribution
/// of `alice_policy`. Exact; no sampling.
ProbabilityDistribution bob_marginal_analytic(const StateVector& shared, Subsystems dims,
                                              const ProjectiveMeasurement& alice_measurement,
                                              const CollapsePolicy& alice_policy,
                                              const ProjectiveMeasurement& bob_measurement);

/// Capacity in bits of the channel with rows W[x][y] = P(y | x), by the
/// Blahut-Arimoto iteration stopped when the upper and lower bounds differ by
/// less than `tolerance` (in bits).
double channel_capacity_bits(const std::vector<std::vector<double>>& channel,
                             double tolerance = 1e-9, std::size_t max_iterations = 100000);

/// Requires at least two settings. `trials` == 0 selects analytic mode.
SignalingReport signaling_experiment(const StateVector& shared, Subsystems dims,
                                     const ProjectiveMeasurement& bob_measurement,
                                     const std::vector<AliceSetting>& settings, std::uint64_t trials,
                                     std::uint64_t seed, Execution exec = Execution::Parallel);

}  // namespace weakcollapse
