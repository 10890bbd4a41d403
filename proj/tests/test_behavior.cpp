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

#include <algorithm>
#include <cmath>
#include <functional>

#include "weakcollapse/behavior.hpp"
#include "weakcollapse/errors.hpp"
#include "weakcollapse/parallel.hpp"

using namespace weakcollapse;
using namespace weakcollapse::behavior;

namespace {

// Textbook Hill estimator with threshold X_(k+1), written independently.
double hill_oracle(std::vector<double> x, std::size_t k) {
  std::sort(x.begin(), x.end(), std::greater<>());
  double acc = 0.0;
  for (std::size_t i = 0; i < k; ++i) acc += std::log(x[i]) - std::log(x[k]);
  return static_cast<double>(k) / acc;
}

std::vector<double> to_vector(const EventSequence& s) { return {s.intervals().begin(), s.intervals().end()}; }

}  // namespace

TEST_CASE("generate_sequence: examples") {
  Rng rng(1);
  const auto e = generate_sequence(ExponentialKind{1.0}, 10000, rng);
  double mean = 0.0;
  for (double x : e.intervals()) mean += x;
  mean /= 10000.0;
  CHECK(mean >= 0.97);
  CHECK(mean <= 1.03);

  const auto p = generate_sequence(ParetoKind{1.5, 1.0}, 10000, rng);
  CHECK(*std::min_element(p.intervals().begin(), p.intervals().end()) >= 1.0);

  Rng a(7), b(7);
  CHECK(to_vector(generate_sequence(ParetoKind{}, 500, a)) == to_vector(generate_sequence(ParetoKind{}, 500, b)));
}

TEST_CASE("generate_sequence: preconditions") {
  Rng rng(2);
  CHECK_THROWS_AS(generate_sequence(ExponentialKind{1.0}, 99, rng), BadParameter);
  CHECK_THROWS_AS(generate_sequence(ExponentialKind{0.0}, 1000, rng), BadParameter);
  CHECK_THROWS_AS(generate_sequence(ParetoKind{-1.0, 1.0}, 1000, rng), BadParameter);
  CHECK_THROWS_AS(generate_sequence(ParetoKind{1.5, 0.0}, 1000, rng), BadParameter);
  CHECK_THROWS_AS(EventSequence({1.0, 0.0}), BadParameter);
  CHECK_THROWS_AS(EventSequence({1.0, std::nan("")}), BadParameter);
}

TEST_CASE("tail_exponent: examples") {
  Rng rng(3);
  const auto p = generate_sequence(ParetoKind{1.5, 1.0}, 100000, rng);
  const double hp = tail_exponent(p, 1000);
  CHECK(hp >= 1.35);
  CHECK(hp <= 1.65);
  CHECK(std::abs(hp - hill_oracle(to_vector(p), 1000)) < 1e-9);

  const auto e = generate_sequence(ExponentialKind{1.0}, 100000, rng);
  CHECK(tail_exponent(e, 1000) > 3.0);

  CHECK_THROWS_AS(tail_exponent(EventSequence(std::vector<double>(1000, 2.0)), 10), DegenerateSequence);
  CHECK_THROWS_AS(tail_exponent(p, 9), BadParameter);
  CHECK_THROWS_AS(tail_exponent(EventSequence(std::vector<double>(99, 1.0)), 10), BadParameter);
}

TEST_CASE("classify: examples and thresholds") {
  Rng rng(4);
  const auto short_seq = generate_sequence(ParetoKind{}, 500, rng);
  CHECK_THROWS_AS(classify(short_seq), BadParameter);

  const auto p = generate_sequence(ParetoKind{1.5, 1.0}, 10000, rng);
  const auto r = classify(p);
  CHECK(r.k == 100);
  CHECK(r.sample_size == 10000);
  CHECK(r.classification == Pattern::LevyLike);
  // Thresholds are overridable: with both below the estimate it reads noise-like.
  CHECK(classify(p, Thresholds{0.5, 1.0}).classification == Pattern::NoiseLike);
  CHECK(classify(p, Thresholds{0.5, 10.0}).classification == Pattern::Indeterminate);
  CHECK(to_string(Pattern::LevyLike) == "levy_like");
  CHECK(to_string(Pattern::NoiseLike) == "noise_like");
  CHECK(to_string(Pattern::Indeterminate) == "indeterminate");
}

TEST_CASE("classifier self-consistency over 200 seeds") {
  const auto levy = run_trials(200, 5, [](std::uint64_t, Rng& rng) {
    return classify(generate_sequence(ParetoKind{1.5, 1.0}, 10000, rng)).classification;
  });
  const auto noise = run_trials(200, 6, [](std::uint64_t, Rng& rng) {
    return classify(generate_sequence(ExponentialKind{1.0}, 10000, rng)).classification;
  });
  CHECK(std::count(levy.begin(), levy.end(), Pattern::LevyLike) >= 190);
  CHECK(std::count(noise.begin(), noise.end(), Pattern::NoiseLike) >= 190);
}

TEST_CASE("property: Hill is scale-free") {
  Rng rng(7);
  for (int c = 0; c < 200; ++c) {
    const auto s = generate_sequence(ParetoKind{0.5 + 3 * uniform01(rng), 1.0}, 1000, rng);
    const double factor = std::exp(8 * uniform01(rng) - 4);
    auto scaled = to_vector(s);
    for (double& x : scaled) x *= factor;
    CHECK(std::abs(tail_exponent(s, 50) - tail_exponent(EventSequence(scaled), 50)) < 1e-9);
  }
}

TEST_CASE("property: heavier tails give smaller estimates") {
  auto mean_estimate = [](double alpha, std::uint64_t seed) {
    const auto est = run_trials(100, seed, [alpha](std::uint64_t, Rng& rng) {
      return classify(generate_sequence(ParetoKind{alpha, 1.0}, 10000, rng)).tail_exponent;
    });
    double m = 0.0;
    for (double x : est) m += x;
    return m / 100.0;
  };
  CHECK(mean_estimate(1.2, 8) < mean_estimate(2.5, 9));
}

TEST_CASE("sequence text round-trip") {
  Rng rng(10);
  const auto s = generate_sequence(ExponentialKind{2.0}, 200, rng);
  CHECK(to_vector(parse_sequence(format_sequence(s))) == to_vector(s));
  CHECK(parse_sequence("# header\n1.5\n\n2\n").size() == 2);
  CHECK_THROWS_AS(parse_sequence("1.0\nabc\n"), ParseError);
  CHECK_THROWS_AS(parse_sequence("1.0\n-2\n"), BadParameter);
}
