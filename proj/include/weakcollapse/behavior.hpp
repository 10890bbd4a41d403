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

// Inter-event interval sequences: a noise-like baseline (exponential) and a
// heavy-tailed alternative (Pareto), plus a tail-index classifier built on the
// Hill estimator.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "weakcollapse/rng.hpp"

namespace weakcollapse::behavior {

inline constexpr std::size_t kMinAnalysisLength = 100;
inline constexpr std::size_t kMinClassifyLength = 1000;

class EventSequence {
 public:
  /// Every interval must be finite and > 0.
  explicit EventSequence(std::vector<double> intervals);

  std::size_t size() const noexcept { return intervals_.size(); }
  std::span<const double> intervals() const noexcept { return intervals_; }

 private:
  std::vector<double> intervals_;
};

struct ExponentialKind {
  double rate = 1.0;
};
struct ParetoKind {
  double alpha = 1.5;
  double xmin = 1.0;
};
using SequenceKind = std::variant<ExponentialKind, ParetoKind>;

enum class Pattern { NoiseLike, LevyLike, Indeterminate };
std::string to_string(Pattern p);

struct Thresholds {
  double levy_below = 2.5;
  double noise_above = 3.5;
};

struct PatternReport {
  double tail_exponent = 0.0;
  Pattern classification = Pattern::Indeterminate;
  std::size_t sample_size = 0;
  std::size_t k = 0;
};

EventSequence generate_sequence(const SequenceKind& kind, std::size_t length, Rng& rng);

/// Hill estimate of the tail index from the k largest intervals:
/// 1 / ((1/k) sum_{i<k} log(X_(i) / X_(k))), order statistics descending.
double tail_exponent(const EventSequence& seq, std::size_t k);

/// k = max(10, length / 100); levy-like below `levy_below`, noise-like above
/// `noise_above`, indeterminate in between.
PatternReport classify(const EventSequence& seq, const Thresholds& thresholds = {});

/// One interval per line; blank lines and '#' comments ignored.
EventSequence parse_sequence(std::string_view text);
std::string format_sequence(const EventSequence& seq);

}  // namespace weakcollapse::behavior
