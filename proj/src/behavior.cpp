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

#include "weakcollapse/behavior.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "weakcollapse/errors.hpp"
#include "weakcollapse/text.hpp"

namespace weakcollapse::behavior {

EventSequence::EventSequence(std::vector<double> intervals) : intervals_(std::move(intervals)) {
  for (double x : intervals_) {
    if (!(x > 0.0) || !std::isfinite(x)) throw BadParameter("intervals must be finite and positive");
  }
}

std::string to_string(Pattern p) {
  switch (p) {
    case Pattern::NoiseLike:
      return "noise_like";
    case Pattern::LevyLike:
      return "levy_like";
    case Pattern::Indeterminate:
      break;
  }
  return "indeterminate";
}

EventSequence generate_sequence(const SequenceKind& kind, std::size_t length, Rng& rng) {
  if (length < kMinAnalysisLength) throw BadParameter("sequence length must be at least 100");
  std::vector<double> out(length);
  if (const auto* e = std::get_if<ExponentialKind>(&kind)) {
    if (!(e->rate > 0.0)) throw BadParameter("exponential rate must be positive");
    for (double& x : out) x = -std::log(uniform_open01(rng)) / e->rate;
  } else {
    const auto& p = std::get<ParetoKind>(kind);
    if (!(p.alpha > 0.0)) throw BadParameter("pareto alpha must be positive");
    if (!(p.xmin > 0.0)) throw BadParameter("pareto xmin must be positive");
    // Inverse CDF; u in (0, 1) keeps every draw >= xmin and finite.
    for (double& x : out) x = p.xmin * std::pow(uniform_open01(rng), -1.0 / p.alpha);
  }
  return EventSequence(std::move(out));
}

double tail_exponent(const EventSequence& seq, std::size_t k) {
  if (seq.size() < kMinAnalysisLength) throw BadParameter("sequence must have at least 100 intervals");
  if (k < 10 || k > seq.size() / 2) throw BadParameter("k must satisfy 10 <= k <= length / 2");
  std::vector<double> top(seq.intervals().begin(), seq.intervals().end());
  std::partial_sort(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(k + 1), top.end(),
                    std::greater<>());
  if (top[0] == top[k - 1]) throw DegenerateSequence("the top-k intervals are all equal");
  const double threshold = top[k];
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += std::log(top[i] / threshold);
  const double gamma = sum / static_cast<double>(k);
  if (!(gamma > 0.0)) throw DegenerateSequence("zero Hill statistic");
  return 1.0 / gamma;
}

PatternReport classify(const EventSequence& seq, const Thresholds& thresholds) {
  if (seq.size() < kMinClassifyLength) throw BadParameter("classification needs at least 1000 intervals");
  if (!(thresholds.levy_below <= thresholds.noise_above)) {
    throw BadParameter("levy threshold must not exceed noise threshold");
  }
  PatternReport report;
  report.sample_size = seq.size();
  report.k = std::max<std::size_t>(10, seq.size() / 100);
  report.tail_exponent = tail_exponent(seq, report.k);
  if (report.tail_exponent < thresholds.levy_below) {
    report.classification = Pattern::LevyLike;
  } else if (report.tail_exponent > thresholds.noise_above) {
    report.classification = Pattern::NoiseLike;
  } else {
    report.classification = Pattern::Indeterminate;
  }
  return report;
}

EventSequence parse_sequence(std::string_view text) {
  std::vector<double> values;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    values.push_back(parse_double(line, "interval on line " + std::to_string(line_no)));
  }
  return EventSequence(std::move(values));
}

std::string format_sequence(const EventSequence& seq) {
  std::string out;
  for (double x : seq.intervals()) {
    out += format_double(x);
    out += '\n';
  }
  return out;
}

}  // namespace weakcollapse::behavior
