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

#include "weakcollapse/signaling.hpp"

#include <algorithm>
#include <cmath>

#include "weakcollapse/errors.hpp"
#include "weakcollapse/stats.hpp"

namespace weakcollapse {
namespace {

void check_dims(const StateVector& shared, Subsystems dims, const ProjectiveMeasurement& alice,
                const ProjectiveMeasurement& bob) {
  if (shared.dim() != dims.total()) throw DimensionMismatch("shared state does not match a x b");
  if (alice.dim() != dims.a) throw DimensionMismatch("Alice's measurement does not act on her factor");
  if (bob.dim() != dims.b) throw DimensionMismatch("Bob's measurement does not act on his factor");
}

}  // namespace

ProbabilityDistribution bob_marginal_analytic(const StateVector& shared, Subsystems dims,
                                              const ProjectiveMeasurement& alice_measurement,
                                              const CollapsePolicy& alice_policy,
                                              const ProjectiveMeasurement& bob_measurement) {
  check_dims(shared, dims, alice_measurement, bob_measurement);
  const auto alice = ProjectiveMeasurement::local(alice_measurement, dims, Side::A);
  const auto bob = ProjectiveMeasurement::local(bob_measurement, dims, Side::B);
  const ProbabilityDistribution q = effective_distribution(alice_policy, shared, alice);
  std::vector<double> marginal(bob.outcomes(), 0.0);
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (q[j] <= 0.0) continue;
    const ProbabilityDistribution given = born_distribution(collapse(shared, alice, j), bob);
    for (std::size_t y = 0; y < marginal.size(); ++y) marginal[y] += q[j] * given[y];
  }
  return ProbabilityDistribution(std::move(marginal));
}

double channel_capacity_bits(const std::vector<std::vector<double>>& channel, double tolerance,
                             std::size_t max_iterations) {
  if (channel.empty()) throw BadParameter("channel has no inputs");
  const std::size_t nx = channel.size();
  const std::size_t ny = channel.front().size();
  for (const auto& row : channel) {
    if (row.size() != ny) throw LengthMismatch("channel rows differ in length");
  }
  std::vector<double> p(nx, 1.0 / static_cast<double>(nx));
  std::vector<double> c(nx);
  double lower = 0.0;
  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    std::vector<double> q(ny, 0.0);
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y) q[y] += p[x] * channel[x][y];
    for (std::size_t x = 0; x < nx; ++x) {
      double d = 0.0;  // relative entropy D(W(.|x) || q) in nats
      for (std::size_t y = 0; y < ny; ++y) {
        const double w = channel[x][y];
        if (w > 0.0) d += w * std::log(w / q[y]);
      }
      c[x] = std::exp(d);
    }
    double z = 0.0;
    for (std::size_t x = 0; x < nx; ++x) z += p[x] * c[x];
    lower = std::log(z);
    const double upper = std::log(*std::max_element(c.begin(), c.end()));
    if ((upper - lower) / std::log(2.0) < tolerance) break;
    for (std::size_t x = 0; x < nx; ++x) p[x] *= c[x] / z;
  }
  return std::max(0.0, lower / std::log(2.0));
}

SignalingReport signaling_experiment(const StateVector& shared, Subsystems dims,
                                     const ProjectiveMeasurement& bob_measurement,
                                     const std::vector<AliceSetting>& settings, std::uint64_t trials,
                                     std::uint64_t seed, Execution exec) {
  if (settings.size() < 2) throw BadParameter("signaling needs at least two Alice settings");
  SignalingReport report;
  report.mode = trials == 0 ? SignalingMode::Analytic : SignalingMode::Empirical;
  report.trials_per_setting = trials;
  const auto bob = ProjectiveMeasurement::local(bob_measurement, dims, Side::B);

  for (std::size_t s = 0; s < settings.size(); ++s) {
    const AliceSetting& setting = settings[s];
    check_dims(shared, dims, setting.measurement, bob_measurement);
    report.labels.push_back(setting.label);
    if (report.mode == SignalingMode::Analytic) {
      report.bob_marginals.push_back(
          bob_marginal_analytic(shared, dims, setting.measurement, setting.policy, bob_measurement));
      continue;
    }
    const auto alice = ProjectiveMeasurement::local(setting.measurement, dims, Side::A);
    auto one_trial = [&](CollapsePolicy& policy, Rng& rng) {
      const OutcomeSample a = sample_outcome(policy, shared, alice, rng);
      const ProbabilityDistribution given = born_distribution(collapse(shared, alice, a.outcome), bob);
      return sample_index(given.probs(), rng);
    };
    // Settings get disjoint stream families so they are independent.
    const std::uint64_t setting_seed = derive_seed(seed, 0x5e771e0000ULL + s);
    std::vector<std::size_t> outcomes;
    if (is_scripted(setting.policy)) {
      CollapsePolicy policy = setting.policy;
      outcomes = run_trials_serial(trials, setting_seed,
                                   [&](std::uint64_t, Rng& rng) { return one_trial(policy, rng); });
    } else {
      outcomes = run_trials(exec, trials, setting_seed, [&](std::uint64_t, Rng& rng) {
        CollapsePolicy policy = setting.policy;
        return one_trial(policy, rng);
      });
    }
    std::vector<double> freq(bob.outcomes(), 0.0);
    for (std::size_t y : outcomes) freq[y] += 1.0;
    for (double& f : freq) f /= static_cast<double>(trials);
    report.bob_marginals.emplace_back(std::move(freq));
  }

  std::vector<std::vector<double>> channel;
  for (const auto& m : report.bob_marginals) channel.emplace_back(m.probs().begin(), m.probs().end());
  for (std::size_t i = 0; i < channel.size(); ++i)
    for (std::size_t j = i + 1; j < channel.size(); ++j)
      report.max_tv = std::max(report.max_tv, tv_distance(channel[i], channel[j]));
  report.channel_bits = channel_capacity_bits(channel);
  return report;
}

}  // namespace weakcollapse
