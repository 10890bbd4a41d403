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

#include "weakcollapse/policy.hpp"

#include <cmath>
#include <string>

#include "weakcollapse/errors.hpp"
#include "weakcollapse/stats.hpp"
#include "weakcollapse/text.hpp"

namespace weakcollapse {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool admissible(const ProbabilityDistribution& born, std::size_t outcome) {
  return outcome < born.size() && born[outcome] > kForbiddenThreshold;
}

ProbabilityDistribution point_mass(std::size_t size, std::size_t at) {
  std::vector<double> p(size, 0.0);
  p[at] = 1.0;
  return ProbabilityDistribution(std::move(p));
}

ProbabilityDistribution base_distribution(const BasePolicy& policy,
                                          const ProbabilityDistribution& born) {
  return std::visit(
      Overloaded{
          [&](const BornPolicy&) { return born; },
          [&](const ForcedPolicy& p) {
            if (!admissible(born, p.target)) {
              throw ForbiddenOutcome("forced outcome " + std::to_string(p.target) +
                                     " has zero Born probability");
            }
            return point_mass(born.size(), p.target);
          },
          [&](const BiasedPolicy& p) {
            if (p.weights.size() != born.size()) {
              throw DimensionMismatch("biased weights have " + std::to_string(p.weights.size()) +
                                      " entries for " + std::to_string(born.size()) + " outcomes");
            }
            for (std::size_t j = 0; j < born.size(); ++j) {
              if (p.weights[j] > kForbiddenThreshold && !admissible(born, j)) {
                throw ForbiddenOutcome("biased weight on outcome " + std::to_string(j) +
                                       " which has zero Born probability");
              }
            }
            return p.weights;
          },
      },
      policy);
}

struct Resolved {
  ProbabilityDistribution dist;
  bool forbidden_attempted;
};

Resolved resolve(const CollapsePolicy& policy, const ProbabilityDistribution& born) {
  if (const auto* script = std::get_if<ScriptedPolicy>(&policy)) {
    if (script->cursor < script->sequence.size()) {
      const std::size_t entry = script->sequence[script->cursor];
      if (admissible(born, entry)) return {point_mass(born.size(), entry), false};
      return {base_distribution(script->fallback, born), true};
    }
    return {base_distribution(script->fallback, born), false};
  }
  return std::visit(
      Overloaded{
          [&](const ScriptedPolicy&) -> Resolved { throw InvalidPolicy("unreachable"); },
          [&](const auto& base) -> Resolved { return {base_distribution(BasePolicy(base), born), false}; },
      },
      policy);
}

std::string format_base(const BasePolicy& policy) {
  return std::visit(Overloaded{
                        [](const BornPolicy&) { return std::string("born"); },
                        [](const ForcedPolicy& p) { return "forced:" + std::to_string(p.target); },
                        [](const BiasedPolicy& p) {
                          std::string s = "biased:";
                          for (std::size_t j = 0; j < p.weights.size(); ++j) {
                            if (j) s += ',';
                            s += format_double(p.weights[j]);
                          }
                          return s;
                        },
                    },
                    policy);
}

BasePolicy parse_base(std::string_view text) {
  text = trim(text);
  if (text == "born") return BornPolicy{};
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidPolicy("unknown policy '" + std::string(text) + "'");
  }
  const auto head = text.substr(0, colon);
  const auto body = text.substr(colon + 1);
  if (head == "forced") return ForcedPolicy{parse_uint(body, "forced target")};
  if (head == "biased") {
    try {
      return BiasedPolicy{ProbabilityDistribution(parse_double_list(body, "biased weights"))};
    } catch (const InvalidState& e) {
      throw InvalidPolicy(std::string("biased weights: ") + e.what());
    }
  }
  throw InvalidPolicy("unknown policy '" + std::string(text) + "'");
}

}  // namespace

std::vector<std::size_t> admissible_outcomes(const StateVector& s, const ProjectiveMeasurement& m) {
  const ProbabilityDistribution born = born_distribution(s, m);
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < born.size(); ++j) {
    if (born[j] > kForbiddenThreshold) out.push_back(j);
  }
  return out;
}

ProbabilityDistribution effective_distribution(const CollapsePolicy& policy,
                                               const ProbabilityDistribution& born) {
  return resolve(policy, born).dist;
}

ProbabilityDistribution effective_distribution(const CollapsePolicy& policy, const StateVector& s,
                                               const ProjectiveMeasurement& m) {
  return effective_distribution(policy, born_distribution(s, m));
}

std::size_t sample_index(std::span<const double> probs, Rng& rng) {
  const double u = uniform01(rng);
  double cumulative = 0.0;
  std::size_t last_positive = probs.size();
  for (std::size_t j = 0; j < probs.size(); ++j) {
    if (probs[j] <= 0.0) continue;
    last_positive = j;
    cumulative += probs[j];
    if (u < cumulative) return j;
  }
  if (last_positive == probs.size()) throw InvalidState("cannot sample from an all-zero distribution");
  return last_positive;
}

OutcomeSample sample_outcome(CollapsePolicy& policy, const StateVector& s,
                             const ProjectiveMeasurement& m, Rng& rng) {
  const ProbabilityDistribution born = born_distribution(s, m);
  const Resolved resolved = resolve(policy, born);
  if (auto* script = std::get_if<ScriptedPolicy>(&policy)) ++script->cursor;
  OutcomeSample sample;
  sample.outcome = sample_index(resolved.dist.probs(), rng);
  sample.born_prob = born[sample.outcome];
  sample.policy_prob = resolved.dist[sample.outcome];
  sample.forbidden_attempted = resolved.forbidden_attempted;
  return sample;
}

DeviationStatistic deviation_statistic(std::span<const std::uint64_t> counts,
                                       const ProbabilityDistribution& reference) {
  if (counts.size() != reference.size()) throw LengthMismatch("counts and reference differ in length");
  double n = 0.0;
  for (auto c : counts) n += static_cast<double>(c);
  if (n < 1.0) throw BadParameter("deviation_statistic needs at least one count");
  std::vector<double> freq(counts.size());
  for (std::size_t j = 0; j < counts.size(); ++j) freq[j] = static_cast<double>(counts[j]) / n;
  DeviationStatistic stat;
  stat.tv = tv_distance(freq, reference.probs());
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (reference[j] <= 0.0) continue;
    const double expected = n * reference[j];
    const double diff = static_cast<double>(counts[j]) - expected;
    stat.chi2 += diff * diff / expected;
  }
  return stat;
}

CollapsePolicy parse_policy(std::string_view text) {
  text = trim(text);
  if (text.starts_with("scripted:")) {
    const auto body = text.substr(9);
    const auto semi = body.find(';');
    const auto seq_text = body.substr(0, semi);
    ScriptedPolicy script;
    script.fallback = BornPolicy{};
    if (trim(seq_text).empty()) throw InvalidPolicy("scripted policy needs at least one entry");
    for (auto part : split(seq_text, ',')) script.sequence.push_back(parse_uint(part, "scripted entry"));
    if (semi != std::string_view::npos) {
      const auto option = trim(body.substr(semi + 1));
      if (!option.starts_with("fallback=")) {
        throw InvalidPolicy("scripted policy expects ';fallback=<policy>'");
      }
      const auto fallback = option.substr(9);
      if (trim(fallback).starts_with("scripted")) {
        throw InvalidPolicy("a scripted fallback cannot itself be scripted");
      }
      script.fallback = parse_base(fallback);
    }
    return script;
  }
  return std::visit([](auto p) -> CollapsePolicy { return p; }, parse_base(text));
}

std::string format_policy(const CollapsePolicy& policy) {
  if (const auto* script = std::get_if<ScriptedPolicy>(&policy)) {
    std::string s = "scripted:";
    for (std::size_t i = 0; i < script->sequence.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(script->sequence[i]);
    }
    return s + ";fallback=" + format_base(script->fallback);
  }
  return std::visit(
      Overloaded{
          [](const ScriptedPolicy&) -> std::string { return {}; },
          [](const auto& base) { return format_base(BasePolicy(base)); },
      },
      policy);
}

bool is_scripted(const CollapsePolicy& policy) noexcept {
  return std::holds_alternative<ScriptedPolicy>(policy);
}

}  // namespace weakcollapse
