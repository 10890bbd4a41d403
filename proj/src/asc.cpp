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

#include "weakcollapse/asc.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "weakcollapse/errors.hpp"
#include "weakcollapse/stats.hpp"

namespace weakcollapse::asc {
namespace {

constexpr double kTieTolerance = 1e-12;

std::size_t stage_outcome(const Stage& stage) {
  if (const auto* c = std::get_if<CollapseStage>(&stage.record)) return c->outcome;
  if (const auto* c = std::get_if<ComputeStage>(&stage.record)) return c->chosen;
  throw InvalidState("stage carries no outcome");
}

}  // namespace

AlternativeSet::AlternativeSet(std::vector<std::string> labels, std::vector<double> priorities)
    : labels_(std::move(labels)), priorities_(std::move(priorities)) {
  if (labels_.size() != priorities_.size()) throw LengthMismatch("labels and priorities differ in length");
  if (labels_.empty()) throw BadParameter("alternative set is empty");
  std::set<std::string> seen;
  bool any_positive = false;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!seen.insert(labels_[i]).second) throw BadParameter("duplicate label '" + labels_[i] + "'");
    if (!(priorities_[i] >= 0.0) || !std::isfinite(priorities_[i])) {
      throw BadParameter("priority of '" + labels_[i] + "' must be a finite non-negative number");
    }
    any_positive = any_positive || priorities_[i] > 0.0;
  }
  if (!any_positive) throw AllZeroPriorities("at least one priority must be positive");
}

double NormFunction::value(const std::string& label) const {
  const auto it = values_.find(label);
  if (it == values_.end()) throw BadParameter("norm is not defined on '" + label + "'");
  return it->second;
}

std::size_t AgentTrace::final_outcome() const {
  if (stages.empty()) throw InvalidState("empty trace");
  return stage_outcome(stages.back());
}

bool AgentTrace::is_cgp_shape() const {
  return stages.size() == 3 && std::holds_alternative<AttentionStage>(stages[0].record) &&
         std::holds_alternative<SelectionStage>(stages[1].record) &&
         std::holds_alternative<CollapseStage>(stages[2].record) &&
         stages[0].tick < stages[1].tick && stages[1].tick < stages[2].tick;
}

bool AgentTrace::is_nr_shape() const {
  return stages.size() == 1 && std::holds_alternative<ComputeStage>(stages[0].record);
}

StateVector attention(const AlternativeSet& alts) {
  double total = 0.0;
  for (double p : alts.priorities()) total += p;
  Vector amps(static_cast<Eigen::Index>(alts.size()));
  for (std::size_t i = 0; i < alts.size(); ++i) {
    amps[static_cast<Eigen::Index>(i)] = std::sqrt(alts.priorities()[i] / total);
  }
  return StateVector::normalized(std::move(amps));
}

Selection selection(const StateVector& s, const AlternativeSet& alts, const NormFunction& norm,
                    Rng& rng, double lambda) {
  if (s.dim() != alts.size()) throw DimensionMismatch("state and alternative set differ in size");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw BadParameter("lambda must be in [0, 1]");
  const ProbabilityDistribution born = born_distribution(s, ProjectiveMeasurement::computational(s.dim()));
  std::vector<std::size_t> admissible;
  for (std::size_t j = 0; j < born.size(); ++j) {
    if (born[j] > kForbiddenThreshold) admissible.push_back(j);
  }
  if (admissible.empty()) throw NoAdmissibleAlternative("no alternative has nonzero amplitude");

  if (lambda < 1.0 && uniform01(rng) >= lambda) {
    return {sample_index(born.probs(), rng), false};
  }

  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j : admissible) best = std::max(best, norm.value(alts.labels()[j]));
  std::vector<double> tied(born.size(), 0.0);
  std::size_t tie_count = 0;
  std::size_t only = 0;
  for (std::size_t j : admissible) {
    if (std::abs(norm.value(alts.labels()[j]) - best) <= kTieTolerance) {
      tied[j] = born[j];
      only = j;
      ++tie_count;
    }
  }
  if (tie_count == 1) return {only, false};
  return {sample_index(tied, rng), true};
}

AgentTrace act(const AlternativeSet& alts, const NormFunction& norm, Rng& rng, double lambda) {
  AgentTrace trace;
  StateVector state = attention(alts);
  const Selection chosen = selection(state, alts, norm, rng, lambda);
  const auto measurement = ProjectiveMeasurement::computational(state.dim());
  CollapsePolicy force = ForcedPolicy{chosen.chosen};
  const OutcomeSample outcome = sample_outcome(force, state, measurement, rng);
  if (outcome.outcome != chosen.chosen) throw InvalidState("forced collapse missed the selection");
  trace.stages.push_back({1, AttentionStage{std::move(state)}});
  trace.stages.push_back({2, SelectionStage{chosen.chosen, chosen.tie_broken}});
  trace.stages.push_back({3, CollapseStage{outcome.outcome}});
  return trace;
}

AgentTrace nr_act(const AlternativeSet& alts, const NormFunction& norm) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < alts.size(); ++j) {
    if (norm.value(alts.labels()[j]) > norm.value(alts.labels()[best])) best = j;
  }
  AgentTrace trace;
  trace.stages.push_back({1, ComputeStage{best}});
  return trace;
}

TraceComparison distinguish_traces(const AgentTrace& a, const AgentTrace& b) {
  TraceComparison cmp;
  cmp.objectively_identical = a.final_outcome() == b.final_outcome();
  auto shape = [](const AgentTrace& t) {
    std::vector<std::size_t> kinds;
    for (const auto& s : t.stages) kinds.push_back(s.record.index());
    return kinds;
  };
  cmp.structurally_distinct = shape(a) != shape(b);
  return cmp;
}

AscSummary asc_experiment(const AlternativeSet& alts, const NormFunction& norm, double lambda,
                          std::uint64_t trials, std::uint64_t seed, Execution exec) {
  if (trials == 0) throw BadParameter("asc experiment needs at least one trial");
  AscSummary summary;
  summary.traces = run_trials(exec, trials, seed,
                              [&](std::uint64_t, Rng& rng) { return act(alts, norm, rng, lambda); });
  summary.counts.assign(alts.size(), 0);
  for (const auto& t : summary.traces) ++summary.counts[t.final_outcome()];
  summary.born = born_distribution(attention(alts), ProjectiveMeasurement::computational(alts.size()));
  summary.deviation = deviation_statistic(summary.counts, summary.born);
  summary.chi2_p_value = chi_square_test(summary.counts, summary.born.probs()).p_value;
  const AgentTrace robot = nr_act(alts, norm);
  summary.nr_outcome = robot.final_outcome();
  summary.cgp_vs_nr = distinguish_traces(summary.traces.front(), robot);
  return summary;
}

}  // namespace weakcollapse::asc
