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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "weakcollapse/asc.hpp"
#include "weakcollapse/errors.hpp"
#include "weakcollapse/stats.hpp"

using namespace weakcollapse;
using namespace weakcollapse::asc;

namespace {

AlternativeSet good_bad() { return AlternativeSet({"bad", "good"}, {0.5, 0.5}); }
NormFunction moral() { return NormFunction({{"bad", 0.0}, {"good", 1.0}}); }

// The (sqrt(3)/2, 1/2, 0) attention state.
AlternativeSet three() { return AlternativeSet({"a", "b", "c"}, {0.75, 0.25, 0.0}); }

}  // namespace

TEST_CASE("AlternativeSet validation") {
  CHECK_THROWS_AS(AlternativeSet({"a", "b"}, {1.0}), LengthMismatch);
  CHECK_THROWS_AS(AlternativeSet({"a", "a"}, {1.0, 1.0}), BadParameter);
  CHECK_THROWS_AS(AlternativeSet({"a", "b"}, {1.0, -0.1}), BadParameter);
  CHECK_THROWS_AS(AlternativeSet({"a", "b"}, {0.0, 0.0}), AllZeroPriorities);
  CHECK_THROWS_AS(moral().value("neutral"), BadParameter);
}

TEST_CASE("attention: examples") {
  const auto tap = attention(AlternativeSet({"tap", "dont_tap"}, {0.36, 0.64}));
  CHECK(std::abs(tap[0].real() - 0.6) < 1e-12);
  CHECK(std::abs(tap[1].real() - 0.8) < 1e-12);
  const auto uniform = attention(AlternativeSet({"a", "b", "c", "d"}, {2, 2, 2, 2}));
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(uniform[i].real() - 0.5) < 1e-12);
  const auto s = attention(three());
  CHECK(admissible_outcomes(s, ProjectiveMeasurement::computational(3)) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("selection: examples") {
  Rng rng(1);
  const auto alts = good_bad();
  const auto sel = selection(attention(alts), alts, moral(), rng);
  CHECK(alts.labels()[sel.chosen] == "good");
  CHECK_FALSE(sel.tie_broken);

  const AlternativeSet one({"x", "y", "z"}, {0.0, 1.0, 0.0});
  const NormFunction flat({{"x", 5.0}, {"y", 0.0}, {"z", 5.0}});
  const auto only = selection(attention(one), one, flat, rng);
  CHECK(only.chosen == 1);
  CHECK_FALSE(only.tie_broken);
}

TEST_CASE("selection: ties are broken by Born sampling (chi-square, 10^4 trials)") {
  Rng rng(2);
  const AlternativeSet alts({"a", "b", "c", "d"}, {1, 1, 1, 1});
  const NormFunction flat({{"a", 1}, {"b", 1}, {"c", 1}, {"d", 1}});
  const auto s = attention(alts);
  std::vector<std::uint64_t> counts(4, 0);
  for (int i = 0; i < 10000; ++i) {
    const auto sel = selection(s, alts, flat, rng);
    CHECK(sel.tie_broken);
    ++counts[sel.chosen];
  }
  CHECK(chi_square_test(counts, std::vector<double>(4, 0.25)).p_value > 0.001);
}

TEST_CASE("act: examples") {
  Rng rng(3);
  for (double alpha : {0.05, 0.3, 0.6, 0.9, 0.99}) {
    const AlternativeSet alts({"tap", "dont_tap"}, {alpha * alpha, 1 - alpha * alpha});
    const NormFunction norm({{"tap", 0.0}, {"dont_tap", 1.0}});
    CHECK(act(alts, norm, rng).final_outcome() == 1);
  }
  const double theta = 0.7;
  const AlternativeSet q({"0", "1", "2"}, {std::pow(std::cos(theta), 2), std::pow(std::sin(theta), 2), 0.0});
  const NormFunction favors2({{"0", 0.5}, {"1", 0.2}, {"2", 1.0}});
  const auto trace = act(q, favors2, rng);
  CHECK(trace.final_outcome() == 0);
  CHECK(trace.is_cgp_shape());
}

TEST_CASE("act: deviation from Born on (sqrt3/2, 1/2, 0)") {
  const NormFunction favors1({{"a", 0.0}, {"b", 1.0}, {"c", 0.0}});
  const auto summary = asc_experiment(three(), favors1, 1.0, 10000, 4);
  CHECK(summary.counts == std::vector<std::uint64_t>{0, 10000, 0});
  CHECK(std::abs(summary.born[1] - 0.25) < 1e-12);
  CHECK(std::abs(summary.deviation.tv - 0.75) < 1e-12);
}

TEST_CASE("act: constant norm degrades to Born sampling") {
  const NormFunction flat({{"a", 1.0}, {"b", 1.0}, {"c", 1.0}});
  const auto summary = asc_experiment(three(), flat, 1.0, 10000, 5);
  CHECK(summary.counts[2] == 0);
  CHECK(summary.chi2_p_value > 0.001);
}

TEST_CASE("lambda interpolates between argmax and Born") {
  const NormFunction favors1({{"a", 0.0}, {"b", 1.0}, {"c", 0.0}});
  const auto born = asc_experiment(three(), favors1, 0.0, 10000, 6);
  CHECK(born.chi2_p_value > 0.001);
  // At lambda = 1/2 outcome b has probability 1/2 + 1/2 * 1/4 = 5/8.
  const auto half = asc_experiment(three(), favors1, 0.5, 10000, 7);
  const double f = static_cast<double>(half.counts[1]) / 10000.0;
  CHECK(std::abs(f - 0.625) < 3 * std::sqrt(0.625 * 0.375 / 10000));
  Rng rng(8);
  CHECK_THROWS_AS(act(three(), favors1, rng, 1.5), BadParameter);
}

TEST_CASE("nr_act: examples") {
  CHECK(nr_act(good_bad(), moral()).final_outcome() == 1);
  CHECK(nr_act(good_bad(), moral()).is_nr_shape());
  const NormFunction flat({{"bad", 1.0}, {"good", 1.0}});
  CHECK(nr_act(good_bad(), flat).final_outcome() == 0);
}

TEST_CASE("distinguish_traces: examples") {
  Rng rng(9);
  const auto cgp = act(good_bad(), moral(), rng);
  const auto nr = nr_act(good_bad(), moral());
  const auto cmp = distinguish_traces(cgp, nr);
  CHECK(cmp.objectively_identical);
  CHECK(cmp.structurally_distinct);

  Rng r1(10), r2(10);
  const auto same = distinguish_traces(act(good_bad(), moral(), r1), act(good_bad(), moral(), r2));
  CHECK(same.objectively_identical);
  CHECK_FALSE(same.structurally_distinct);

  // The NR's favourite has zero attention amplitude, so the CGP cannot reach it.
  const AlternativeSet blocked({"bad", "good"}, {1.0, 0.0});
  const auto diff = distinguish_traces(act(blocked, moral(), rng), nr_act(blocked, moral()));
  CHECK_FALSE(diff.objectively_identical);
  CHECK(diff.structurally_distinct);
}

TEST_CASE("property: agency is weakly compatible and traces are ordered (1000 cases)") {
  Rng rng(11);
  for (int c = 0; c < 1000; ++c) {
    const std::size_t n = testgen::dim_between(rng, 1, 6);
    std::vector<std::string> labels;
    std::vector<double> prio(n);
    std::map<std::string, double> values;
    for (std::size_t i = 0; i < n; ++i) {
      labels.push_back("L" + std::to_string(i));
      prio[i] = uniform_index(rng, 3) == 0 ? 0.0 : uniform01(rng);
      values[labels[i]] = static_cast<double>(uniform_index(rng, 3));
    }
    if (std::all_of(prio.begin(), prio.end(), [](double p) { return p == 0.0; })) prio[0] = 1.0;
    const AlternativeSet alts(labels, prio);
    const NormFunction norm(values);
    const auto trace = act(alts, norm, rng, uniform01(rng));
    CHECK(prio[trace.final_outcome()] > 0.0);
    REQUIRE(trace.is_cgp_shape());
    CHECK(trace.stages[0].tick < trace.stages[1].tick);
    CHECK(trace.stages[1].tick < trace.stages[2].tick);
    const auto nr = nr_act(alts, norm);
    CHECK(nr.is_nr_shape());
    CHECK(nr.stages.size() == 1);
  }
}

TEST_CASE("property: a norm argmax below certainty shows as tv > 0") {
  Rng rng(12);
  for (int c = 0; c < 50; ++c) {
    const std::size_t n = testgen::dim_between(rng, 2, 5);
    std::vector<std::string> labels;
    std::vector<double> prio(n);
    std::map<std::string, double> values;
    for (std::size_t i = 0; i < n; ++i) {
      labels.push_back("L" + std::to_string(i));
      prio[i] = 0.05 + uniform01(rng);
      values[labels[i]] = static_cast<double>(i);  // unique argmax: the last label
    }
    const auto summary = asc_experiment(AlternativeSet(labels, prio), NormFunction(values), 1.0, 2000, 100 + c);
    const double born_top = summary.born[n - 1];
    CHECK(summary.deviation.tv == doctest::Approx(1.0 - born_top).epsilon(1e-9));
    CHECK(summary.deviation.tv > 0.0);
  }
}

TEST_CASE("asc_experiment: runners agree") {
  const NormFunction flat({{"a", 1.0}, {"b", 1.0}, {"c", 1.0}});
  const auto a = asc_experiment(three(), flat, 1.0, 3000, 13, Execution::Serial);
  const auto b = asc_experiment(three(), flat, 1.0, 3000, 13, Execution::Parallel);
  CHECK(a.counts == b.counts);
}
