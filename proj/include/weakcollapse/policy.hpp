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

// Collapse policies.
//
// A policy maps (state, measurement) to the distribution the outcome is
// actually drawn from. Born sampling is zeroth-order freedom; Forced, Biased
// and Scripted policies are first-order: they may move probability between
// outcomes but only within the Born support. Any request for an outcome of
// zero Born probability throws ForbiddenOutcome.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "weakcollapse/quantum.hpp"
#include "weakcollapse/rng.hpp"

namespace weakcollapse {

struct BornPolicy {};

struct ForcedPolicy {
  std::size_t target = 0;
};

struct BiasedPolicy {
  ProbabilityDistribution weights;
};

/// Policies that may serve as a Scripted fallback. Scripted is excluded at
/// the type level so scripts never nest.
using BasePolicy = std::variant<BornPolicy, ForcedPolicy, BiasedPolicy>;

/// Plays `sequence` entry by entry; an inadmissible entry, or the end of the
/// script, defers to `fallback`. The cursor makes this the one stateful
/// policy: confine each instance to a single trial runner.
struct ScriptedPolicy {
  std::vector<std::size_t> sequence;
  BasePolicy fallback;
  std::size_t cursor = 0;
};

using CollapsePolicy = std::variant<BornPolicy, ForcedPolicy, BiasedPolicy, ScriptedPolicy>;

struct OutcomeSample {
  std::size_t outcome = 0;
  double born_prob = 0.0;
  double policy_prob = 0.0;
  /// Set when a scripted entry was inadmissible and the fallback was used.
  bool forbidden_attempted = false;
};

struct DeviationStatistic {
  double tv = 0.0;
  double chi2 = 0.0;
};

/// Outcomes with Born probability > 1e-12, ascending.
std::vector<std::size_t> admissible_outcomes(const StateVector& s, const ProjectiveMeasurement& m);

ProbabilityDistribution effective_distribution(const CollapsePolicy& policy, const StateVector& s,
                                               const ProjectiveMeasurement& m);

/// Same as above given precomputed Born probabilities.
ProbabilityDistribution effective_distribution(const CollapsePolicy& policy,
                                               const ProbabilityDistribution& born);

/// Draws one outcome. Advances the cursor of a Scripted policy.
OutcomeSample sample_outcome(CollapsePolicy& policy, const StateVector& s,
                             const ProjectiveMeasurement& m, Rng& rng);

/// Inverse-CDF draw that never returns an index of probability zero.
std::size_t sample_index(std::span<const double> probs, Rng& rng);

/// tv = 1/2 sum |c_j/N - r_j|; chi2 = sum over r_j > 0 of (c_j - N r_j)^2 / (N r_j).
DeviationStatistic deviation_statistic(std::span<const std::uint64_t> counts,
                                       const ProbabilityDistribution& reference);

/// Grammar: `born`, `forced:<i>`, `biased:<p0,p1,...>`,
/// `scripted:<i1,i2,...>;fallback=<born|forced:i|biased:...>`. The fallback
/// defaults to born. Throws InvalidPolicy or ParseError.
CollapsePolicy parse_policy(std::string_view text);
std::string format_policy(const CollapsePolicy& policy);

bool is_scripted(const CollapsePolicy& policy) noexcept;

}  // namespace weakcollapse
