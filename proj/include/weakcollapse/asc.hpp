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

// Attention / Selection / Collapse agent, and the deterministic "noble robot"
// that reaches the same decision without a superposition.
//
// Attention turns priorities into amplitudes sqrt(p_j / sum p), so the Born
// distribution of the attended state is the normalized priority vector.
// Selection takes the norm's argmax over the admissible alternatives only and
// breaks ties by Born sampling restricted to the tied set. Collapse forces the
// selected outcome, which can never be forbidden.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "weakcollapse/parallel.hpp"
#include "weakcollapse/policy.hpp"
#include "weakcollapse/quantum.hpp"
#include "weakcollapse/rng.hpp"

namespace weakcollapse::asc {

class AlternativeSet {
 public:
  /// Throws LengthMismatch, BadParameter (duplicate label, negative priority)
  /// or AllZeroPriorities.
  AlternativeSet(std::vector<std::string> labels, std::vector<double> priorities);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<double>& priorities() const noexcept { return priorities_; }

 private:
  std::vector<std::string> labels_;
  std::vector<double> priorities_;
};

class NormFunction {
 public:
  NormFunction() = default;
  explicit NormFunction(std::map<std::string, double> values) : values_(std::move(values)) {}

  /// Throws BadParameter for a label the norm does not cover.
  double value(const std::string& label) const;
  bool covers(const std::string& label) const { return values_.contains(label); }

 private:
  std::map<std::string, double> values_;
};

struct AttentionStage {
  StateVector state;
};
struct SelectionStage {
  std::size_t chosen;
  bool tie_broken;
};
struct CollapseStage {
  std::size_t outcome;
};
struct ComputeStage {
  std::size_t chosen;
};

struct Stage {
  std::uint32_t tick;
  std::variant<AttentionStage, SelectionStage, CollapseStage, ComputeStage> record;
};

struct AgentTrace {
  std::vector<Stage> stages;

  /// The outcome of the last Collapse or Compute stage.
  std::size_t final_outcome() const;
  /// Attention, Selection, Collapse in that order with strictly increasing ticks.
  bool is_cgp_shape() const;
  /// A single Compute stage.
  bool is_nr_shape() const;
};

struct Selection {
  std::size_t chosen = 0;
  bool tie_broken = false;
};

struct TraceComparison {
  bool objectively_identical = false;
  bool structurally_distinct = false;
};

StateVector attention(const AlternativeSet& alts);

/// `lambda` blends the norm argmax (lambda = 1, the default) with plain Born
/// sampling (lambda = 0); values in between choose the argmax path with
/// probability lambda.
Selection selection(const StateVector& s, const AlternativeSet& alts, const NormFunction& norm,
                    Rng& rng, double lambda = 1.0);

/// Attention -> Selection -> Collapse(Forced(J)).
AgentTrace act(const AlternativeSet& alts, const NormFunction& norm, Rng& rng, double lambda = 1.0);

/// Deterministic argmax over every alternative; ties go to the lowest index.
AgentTrace nr_act(const AlternativeSet& alts, const NormFunction& norm);

TraceComparison distinguish_traces(const AgentTrace& a, const AgentTrace& b);

struct AscSummary {
  std::vector<AgentTrace> traces;
  std::vector<std::uint64_t> counts;
  ProbabilityDistribution born{std::vector<double>{1.0}};
  DeviationStatistic deviation;
  double chi2_p_value = 1.0;
  std::size_t nr_outcome = 0;
  TraceComparison cgp_vs_nr;
};

AscSummary asc_experiment(const AlternativeSet& alts, const NormFunction& norm, double lambda,
                          std::uint64_t trials, std::uint64_t seed,
                          Execution exec = Execution::Parallel);

}  // namespace weakcollapse::asc
