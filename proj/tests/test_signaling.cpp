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

#include "generators.hpp"
#include "weakcollapse/errors.hpp"
#include "weakcollapse/signaling.hpp"
#include "weakcollapse/stats.hpp"

using namespace weakcollapse;

namespace {

const Subsystems kQubits{2, 2};
StateVector bell() { return make_state({1.0, 0.0, 0.0, 1.0}); }
ProjectiveMeasurement z() { return ProjectiveMeasurement::computational(2); }
ProjectiveMeasurement x() {
  const std::vector<Vector> b = {make_state({1.0, 1.0}).amplitudes(), make_state({1.0, -1.0}).amplitudes()};
  return ProjectiveMeasurement::from_basis(b);
}

// Bob's marginal by explicit collapse and partial trace, independent of the
// library's analytic routine.
std::vector<double> marginal_oracle(const StateVector& s, Subsystems d, const ProjectiveMeasurement& alice,
                                    const ProbabilityDistribution& q, const Matrix& bob_basis) {
  const auto local = ProjectiveMeasurement::local(alice, d, Side::A);
  std::vector<double> out(static_cast<std::size_t>(bob_basis.cols()), 0.0);
  for (std::size_t j = 0; j < alice.outcomes(); ++j) {
    if (q[j] == 0.0) continue;
    const auto post = collapse(s, local, j);
    const Matrix rb = testgen::partial_trace_oracle(post, d.a, d.b, false);
    for (Eigen::Index k = 0; k < bob_basis.cols(); ++k) {
      const Vector v = bob_basis.col(k);
      out[static_cast<std::size_t>(k)] += q[j] * (v.adjoint() * rb * v)(0, 0).real();
    }
  }
  return out;
}

double h2(double p) { return p <= 0 || p >= 1 ? 0.0 : -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

}  // namespace

TEST_CASE("bob_marginal_analytic: examples") {
  const auto born = bob_marginal_analytic(bell(), kQubits, z(), BornPolicy{}, z());
  CHECK(std::abs(born[0] - 0.5) < 1e-12);
  const auto forced = bob_marginal_analytic(bell(), kQubits, z(), ForcedPolicy{0}, z());
  CHECK(std::abs(forced[0] - 1.0) < 1e-12);
  CHECK(std::abs(forced[1]) < 1e-12);
  const auto biased =
      bob_marginal_analytic(bell(), kQubits, z(), BiasedPolicy{ProbabilityDistribution({0.75, 0.25})}, z());
  CHECK(std::abs(biased[0] - 0.75) < 1e-12);
  CHECK(std::abs(biased[1] - 0.25) < 1e-12);
}

TEST_CASE("signaling_experiment: examples") {
  const auto forced = signaling_experiment(
      bell(), kQubits, z(), {{"0", z(), ForcedPolicy{0}}, {"1", z(), ForcedPolicy{1}}}, 0, 0);
  CHECK(std::abs(forced.max_tv - 1.0) < 1e-12);
  CHECK(std::abs(forced.channel_bits - 1.0) < 1e-6);
  CHECK(forced.mode == SignalingMode::Analytic);

  const auto born = signaling_experiment(bell(), kQubits, z(), {{"z", z(), BornPolicy{}}, {"x", x(), BornPolicy{}}}, 0, 0);
  CHECK(born.max_tv < 1e-12);
  CHECK(born.channel_bits < 1e-9);

  const auto biased = signaling_experiment(
      bell(), kQubits, z(),
      {{"born", z(), BornPolicy{}}, {"biased", z(), BiasedPolicy{ProbabilityDistribution({0.75, 0.25})}}}, 0, 0);
  CHECK(std::abs(biased.max_tv - 0.25) < 1e-12);
}

TEST_CASE("signaling_experiment: preconditions") {
  CHECK_THROWS_AS(signaling_experiment(bell(), kQubits, z(), {{"0", z(), BornPolicy{}}}, 0, 0), BadParameter);
  CHECK_THROWS_AS(signaling_experiment(bell(), {2, 3}, z(), {{"0", z(), BornPolicy{}}, {"1", z(), BornPolicy{}}}, 0, 0),
                  DimensionMismatch);
}

TEST_CASE("channel capacity against closed forms") {
  CHECK(std::abs(channel_capacity_bits({{1, 0}, {0, 1}}) - 1.0) < 1e-9);
  CHECK(std::abs(channel_capacity_bits({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}) - std::log2(3.0)) < 1e-9);
  CHECK(channel_capacity_bits({{0.3, 0.7}, {0.3, 0.7}}) < 1e-9);
  for (double p : {0.01, 0.1, 0.25, 0.4}) {
    CHECK(std::abs(channel_capacity_bits({{1 - p, p}, {p, 1 - p}}) - (1 - h2(p))) < 1e-8);
  }
  // Z-channel with crossover 1/2: log2(5/4).
  CHECK(std::abs(channel_capacity_bits({{1, 0}, {0.5, 0.5}}) - std::log2(1.25)) < 1e-8);
}

TEST_CASE("property: Born-policy null over random entangled instances (500)") {
  Rng rng(41);
  for (int c = 0; c < 500; ++c) {
    const std::size_t a = testgen::dim_between(rng, 2, 4), b = testgen::dim_between(rng, 2, 4);
    const auto shared = random_state(a * b, rng);
    const auto bob = random_basis_measurement(b, rng);
    const auto r = signaling_experiment(
        shared, {a, b}, bob,
        {{"0", random_basis_measurement(a, rng), BornPolicy{}}, {"1", random_basis_measurement(a, rng), BornPolicy{}}},
        0, 0);
    CHECK(r.max_tv < 1e-12);
  }
}

TEST_CASE("property: analytic marginal matches the collapse oracle") {
  Rng rng(42);
  for (int c = 0; c < 300; ++c) {
    const std::size_t a = testgen::dim_between(rng, 2, 4), b = testgen::dim_between(rng, 2, 4);
    const auto shared = testgen::sparse_state(a * b, rng);
    const Matrix ub = random_unitary(b, rng);
    const auto bob = ProjectiveMeasurement::from_basis(testgen::columns(ub));
    const auto alice = random_basis_measurement(a, rng);
    const auto local = ProjectiveMeasurement::local(alice, {a, b}, Side::A);
    const auto adm = admissible_outcomes(shared, local);
    const CollapsePolicy policy = BiasedPolicy{ProbabilityDistribution(testgen::simplex_on(a, adm, rng))};
    const auto q = effective_distribution(policy, shared, local);
    const auto got = bob_marginal_analytic(shared, {a, b}, alice, policy, bob);
    const auto want = marginal_oracle(shared, {a, b}, alice, q, ub);
    for (std::size_t k = 0; k < b; ++k) CHECK(std::abs(got[k] - want[k]) < 1e-10);
  }
}

TEST_CASE("property: product states never signal, whatever the policy") {
  Rng rng(43);
  for (int c = 0; c < 300; ++c) {
    const std::size_t a = testgen::dim_between(rng, 2, 4), b = testgen::dim_between(rng, 2, 4);
    const auto shared = tensor(testgen::sparse_state(a, rng), random_state(b, rng));
    const auto m0 = random_basis_measurement(a, rng), m1 = random_basis_measurement(a, rng);
    const auto adm0 = admissible_outcomes(shared, ProjectiveMeasurement::local(m0, {a, b}, Side::A));
    const auto adm1 = admissible_outcomes(shared, ProjectiveMeasurement::local(m1, {a, b}, Side::A));
    const auto r = signaling_experiment(shared, {a, b}, random_basis_measurement(b, rng),
                                        {{"0", m0, ForcedPolicy{adm0.front()}},
                                         {"1", m1, BiasedPolicy{ProbabilityDistribution(testgen::simplex_on(a, adm1, rng))}}},
                                        0, 0);
    CHECK(r.max_tv < 1e-12);
  }
}

TEST_CASE("property: Bell deviation equals TV(weights, Born)") {
  Rng rng(44);
  for (int c = 0; c < 200; ++c) {
    const auto w = testgen::simplex(2, rng);
    const auto r = signaling_experiment(
        bell(), kQubits, z(),
        {{"born", z(), BornPolicy{}}, {"biased", z(), BiasedPolicy{ProbabilityDistribution(w)}}}, 0, 0);
    CHECK(std::abs(r.max_tv - 0.5 * (std::abs(w[0] - 0.5) + std::abs(w[1] - 0.5))) < 1e-12);
  }
}

TEST_CASE("empirical mode converges to the analytic value within 3 sigma") {
  const std::uint64_t n = 100000;
  const std::vector<AliceSetting> settings = {
      {"born", z(), BornPolicy{}}, {"biased", z(), BiasedPolicy{ProbabilityDistribution({0.75, 0.25})}}};
  const auto an = signaling_experiment(bell(), kQubits, z(), settings, 0, 0);
  const auto em = signaling_experiment(bell(), kQubits, z(), settings, n, 77);
  CHECK(em.mode == SignalingMode::Empirical);
  CHECK(em.trials_per_setting == n);
  for (std::size_t s = 0; s < 2; ++s) {
    const double p = an.bob_marginals[s][0];
    const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(n));
    CHECK(std::abs(em.bob_marginals[s][0] - p) <= 3 * sigma);
  }
  // max_tv is a difference of two such frequencies.
  const double sigma_tv = std::sqrt(0.25 / n + 0.1875 / n);
  CHECK(std::abs(em.max_tv - an.max_tv) <= 3 * sigma_tv);

  const auto serial = signaling_experiment(bell(), kQubits, z(), settings, 5000, 78, Execution::Serial);
  const auto parallel = signaling_experiment(bell(), kQubits, z(), settings, 5000, 78, Execution::Parallel);
  CHECK(serial.max_tv == parallel.max_tv);
}
