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
#include <fstream>
#include <sstream>

#include <Eigen/SVD>

#include "generators.hpp"
#include "weakcollapse/errors.hpp"
#include "weakcollapse/ks.hpp"

using namespace weakcollapse;
using namespace weakcollapse::ks;

namespace {

Ray R(int a, int b, int c, int d) { return Ray({a, b, c, d}); }

// Counts 0/1 labellings of the distinct rays with exactly one 1 per context,
// by enumerating all 2^rays labellings. Independent of the per-context search.
std::uint64_t colorings_by_ray(const KSTable& t) {
  std::vector<Ray> rays;
  for (const auto& [ray, occ] : t.ray_index()) rays.push_back(ray);
  std::vector<std::array<std::size_t, 4>> ctx;
  for (const auto& c : t.contexts()) {
    std::array<std::size_t, 4> ids{};
    for (std::size_t k = 0; k < 4; ++k) {
      ids[k] = static_cast<std::size_t>(std::find(rays.begin(), rays.end(), c.rays[k]) - rays.begin());
    }
    ctx.push_back(ids);
  }
  std::uint64_t found = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rays.size()); ++mask) {
    bool ok = true;
    for (const auto& ids : ctx) {
      int ones = 0;
      for (auto id : ids) ones += static_cast<int>((mask >> id) & 1);
      if (ones != 1) {
        ok = false;
        break;
      }
    }
    found += ok;
  }
  return found;
}

std::vector<Context> builtin_contexts() { return builtin_ks_table().contexts(); }

bool has_kind(const std::vector<TableViolation>& v, TableViolation::Kind k) {
  return std::any_of(v.begin(), v.end(), [&](const auto& x) { return x.kind == k; });
}

}  // namespace

TEST_CASE("Ray canonical form") {
  CHECK(R(-1, 1, 1, 1).components() == std::array<int, 4>{1, -1, -1, -1});
  CHECK(R(2, -2, 0, 0) == R(1, -1, 0, 0));
  CHECK(R(0, -3, 0, 3) == R(0, 1, 0, -1));
  CHECK_THROWS_AS(R(0, 0, 0, 0), InvalidTable);
  CHECK(parse_ray(" ( 1, -1 ,0,0 ) ") == R(1, -1, 0, 0));
  CHECK_THROWS_AS(parse_ray("1,-1,0,0"), ParseError);
  CHECK_THROWS_AS(parse_ray("(1,1,0)"), ParseError);
  CHECK_THROWS_AS(parse_ray("(1,1,0,0,)"), ParseError);
  CHECK(R(1, 1, 0, 0).to_string() == "(1,1,0,0)");
}

TEST_CASE("builtin table: structure") {
  const auto t = builtin_ks_table();
  CHECK(t.contexts().size() == 9);
  CHECK(t.distinct_rays() == 18);
  for (const auto& [ray, occ] : t.ray_index()) {
    CAPTURE(ray.to_string());
    CHECK(occ.size() == 2);
    CHECK(occ[0].context != occ[1].context);
  }
  // The ray shared by the first two contexts.
  const auto& shared = t.ray_index().at(R(0, 0, 0, 1));
  CHECK(shared.size() == 2);
  CHECK(shared[0].context == 0);
  CHECK(shared[1].context == 1);
  // (1,0,0,0) is not one of the eighteen directions.
  CHECK_FALSE(t.ray_index().contains(R(1, 0, 0, 0)));
  for (const auto& c : t.contexts()) {
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i + 1; j < 4; ++j) CHECK(c.rays[i].dot(c.rays[j]) == 0);
    }
  }
  CHECK(validate_table(t).empty());
}

TEST_CASE("validate_table: mutated fixtures") {
  auto ctx = builtin_contexts();
  ctx[0].rays[0] = R(1, 1, 1, 0);
  const auto v = validate_table(KSTable(ctx));
  REQUIRE(has_kind(v, TableViolation::Kind::NotOrthogonal));
  for (const auto& x : v) {
    if (x.kind == TableViolation::Kind::NotOrthogonal) CHECK(x.context == std::optional<std::size_t>(0));
  }

  // Replace a ray in S_3 by a fresh ray orthogonal to the rest of S_3? Simpler:
  // dropping a context leaves its rays with multiplicity one.
  auto fewer = builtin_contexts();
  fewer.pop_back();
  const auto w = validate_table(KSTable(fewer));
  CHECK(has_kind(w, TableViolation::Kind::Multiplicity));
  CHECK(has_kind(w, TableViolation::Kind::ContextCount));
  CHECK(validate_contexts(KSTable(fewer)).empty());
}

TEST_CASE("coloring search: builtin table is not colorable") {
  const auto t = builtin_ks_table();
  const auto r = ks_coloring_search(t);
  CHECK_FALSE(r.colorable);
  CHECK(r.assignments_found == 0);
  CHECK(r.search_space_size == 262144);
  CHECK(colorings_by_ray(t) == 0);
  const auto s = ks_coloring_search_serial(t);
  CHECK(s.assignments_found == 0);
  CHECK(s.search_space_size == 262144);
  CHECK(parity_certificate(t));
}

TEST_CASE("coloring search: small tables") {
  const auto ctx = builtin_contexts();
  const KSTable single({ctx[0]});
  CHECK(ks_coloring_search(single).assignments_found == 4);
  CHECK(ks_coloring_search(single).colorable);
  CHECK(colorings_by_ray(single) == 4);

  const KSTable pair({ctx[0], ctx[1]});  // share (0,0,0,1)
  CHECK(ks_coloring_search(pair).assignments_found == 10);
  CHECK(ks_coloring_search_serial(pair).assignments_found == 10);
  CHECK(colorings_by_ray(pair) == 10);
  CHECK(ks_coloring_search(pair).search_space_size == 16);

  const KSTable disjoint({ctx[0], ctx[2]});
  CHECK_FALSE(parity_certificate(disjoint));

  auto eight = ctx;
  eight.erase(eight.begin() + 4);
  const KSTable e(eight);
  CHECK_FALSE(parity_certificate(e));
  const auto r = ks_coloring_search(e);
  CHECK(r.assignments_found == colorings_by_ray(e));
  CHECK(r.assignments_found == ks_coloring_search_serial(e).assignments_found);
}

TEST_CASE("coloring search rejects non-orthogonal contexts") {
  auto ctx = builtin_contexts();
  ctx[3].rays[1] = R(1, 1, 1, 0);
  CHECK_THROWS_AS(ks_coloring_search(KSTable(ctx)), InvalidTable);
  CHECK_THROWS_AS(ks_coloring_search_serial(KSTable(ctx)), InvalidTable);
  CHECK_THROWS_AS(parity_certificate(KSTable(ctx)), InvalidTable);
}

TEST_CASE("property: search result is invariant under permutations; kernel matches reference") {
  Rng rng(21);
  const auto base = builtin_contexts();
  for (int c = 0; c < 40; ++c) {
    auto ctx = base;
    for (std::size_t i = ctx.size(); i > 1; --i) std::swap(ctx[i - 1], ctx[uniform_index(rng, i)]);
    for (auto& x : ctx) {
      for (std::size_t i = 4; i > 1; --i) std::swap(x.rays[i - 1], x.rays[uniform_index(rng, i)]);
    }
    // Random sub-tables exercise colorable cases as well.
    ctx.erase(ctx.begin() + static_cast<std::ptrdiff_t>(1 + uniform_index(rng, ctx.size())), ctx.end());
    const KSTable t(ctx);
    const auto fast = ks_coloring_search(t);
    const auto ref = ks_coloring_search_serial(t);
    CHECK(fast.assignments_found == ref.assignments_found);
    CHECK(fast.search_space_size == ref.search_space_size);
    CHECK(fast.colorable == (fast.assignments_found > 0));
    if (ctx.size() == base.size()) CHECK(fast.assignments_found == 0);
    if (ctx.size() <= 6) CHECK(fast.assignments_found == colorings_by_ray(t));
  }
}

TEST_CASE("ray-table text format round-trips") {
  const auto t = builtin_ks_table();
  const auto text = format_table(t);
  const auto back = parse_table(text);
  CHECK(format_table(back) == text);
  CHECK(validate_table(back).empty());

  std::ifstream in(WEAKCOLLAPSE_DATA_DIR "/builtin_table.txt");
  std::stringstream file;
  file << in.rdbuf();
  CHECK(format_table(parse_table(file.str())) == text);

  CHECK_THROWS_AS(parse_table("(1,0,0,0) (0,1,0,0) (0,0,1,0)\n"), ParseError);
  CHECK_THROWS_AS(parse_table("(1,0,0,0) (0,1,0,0) (0,0,1,0) (0,0,0,1) (1,1,0,0)\n"), ParseError);
  CHECK_THROWS_AS(parse_table("# nothing\n"), ParseError);
}

TEST_CASE("twin state: reduced states and Schmidt coefficients") {
  const auto s = twin_state();
  CHECK(s.dim() == 16);
  for (Side side : {Side::A, Side::B}) {
    CHECK(testgen::max_abs(reduced_state(s, {4, 4}, side).matrix() - Matrix::Identity(4, 4) / 4.0) < 1e-10);
  }
  Matrix c(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) c(i, j) = s[static_cast<std::size_t>(i * 4 + j)];
  }
  const Eigen::JacobiSVD<Matrix> svd(c);
  for (Eigen::Index k = 0; k < 4; ++k) CHECK(std::abs(svd.singularValues()[k] - 0.5) < 1e-10);
}

TEST_CASE("twin state: coefficient matrix is I/2 in every context basis") {
  const auto s = twin_state();
  const auto table = builtin_ks_table();
  for (const auto& ctx : table.contexts()) {
    CHECK(testgen::max_abs(context_coefficients(s, ctx) - Matrix::Identity(4, 4) / 2.0) < 1e-10);
  }
}

TEST_CASE("fwt: in-context agreement is exact for every policy") {
  const FwtProtocol protocol(builtin_ks_table());
  const CollapsePolicy policies[] = {BornPolicy{}, ForcedPolicy{0}, ForcedPolicy{3},
                                     BiasedPolicy{ProbabilityDistribution({0.1, 0.2, 0.3, 0.4})},
                                     ScriptedPolicy{{2, 1, 0}, BornPolicy{}, 0}};
  for (const auto& policy : policies) {
    const auto summary = fwt_experiment(protocol, FwtSettings{}, policy, 10000, 31);
    CHECK(summary.in_context == 10000);
    CHECK(summary.agreements == 10000);
    CHECK(summary.forbidden_attempts == 0);
  }
  // The first context, its first ray.
  FwtSettings fixed;
  fixed.context = 0;
  fixed.bob_ray = *protocol.ray_id(builtin_ks_table().contexts()[0].rays[0]);
  const auto summary = fwt_experiment(protocol, fixed, BornPolicy{}, 10000, 32);
  CHECK(summary.agreements == 10000);
}

TEST_CASE("fwt_trial convenience and Forced agreement") {
  Rng rng(5);
  CollapsePolicy forced = ForcedPolicy{0};
  const auto ctx = builtin_ks_table().contexts()[0];
  for (int i = 0; i < 1000; ++i) {
    const auto t = fwt_trial(0, ctx.rays[0], forced, rng);
    CHECK(t.alice_outcome == 0);
    CHECK(t.alice_value == AliceValue::One);
    CHECK(t.bob_value == 1);
    const auto u = fwt_trial(0, ctx.rays[2], forced, rng);
    CHECK(u.alice_value == AliceValue::Zero);
    CHECK(u.bob_value == 0);
  }
  CHECK_THROWS_AS(fwt_trial(9, ctx.rays[0], forced, rng), BadParameter);
  CHECK_THROWS_AS(fwt_trial(0, R(1, 2, 3, 4), forced, rng), BadParameter);
}

TEST_CASE("fwt: out-of-context detection matches the analytic overlap within 3 sigma") {
  const FwtProtocol protocol(builtin_ks_table());
  const auto& rays = protocol.rays();
  for (std::size_t context = 0; context < 9; ++context) {
    const auto& ctx = protocol.table().contexts()[context];
    for (std::size_t id = 0; id < rays.size(); ++id) {
      if (std::find(ctx.rays.begin(), ctx.rays.end(), rays[id]) != ctx.rays.end()) continue;
      for (std::size_t forced = 0; forced < 4; ++forced) {
        // Independent overlap from the integer rays.
        const double d = static_cast<double>(rays[id].dot(ctx.rays[forced]));
        const double expect = d * d / static_cast<double>(rays[id].norm2() * ctx.rays[forced].norm2());
        CHECK(std::abs(protocol.overlap2(id, context, forced) - expect) < 1e-12);
      }
      FwtSettings s;
      s.context = context;
      s.bob_ray = id;
      const auto sum = fwt_experiment(protocol, s, ForcedPolicy{1}, 4000, 40 + context);
      const double d = static_cast<double>(rays[id].dot(ctx.rays[1]));
      const double p = d * d / static_cast<double>(rays[id].norm2() * ctx.rays[1].norm2());
      const double sigma = std::sqrt(4000.0 * p * (1 - p));
      CHECK(sum.out_of_context == 4000);
      CHECK(std::abs(static_cast<double>(sum.out_of_context_detections) - 4000.0 * p) <= 3.0 * sigma + 1e-9);
      CHECK(std::abs(sum.out_of_context_expected - 4000.0 * p) < 1e-6);
    }
  }
}

TEST_CASE("fwt: parallel and serial runs produce identical trials") {
  const FwtProtocol protocol(builtin_ks_table());
  FwtSettings any;
  any.selection = RaySelection::Any;
  const auto a = fwt_experiment(protocol, any, BornPolicy{}, 5000, 9, Execution::Parallel);
  const auto b = fwt_experiment(protocol, any, BornPolicy{}, 5000, 9, Execution::Serial);
  REQUIRE(a.trials.size() == b.trials.size());
  for (std::size_t i = 0; i < a.trials.size(); ++i) {
    CHECK(a.trials[i].alice_outcome == b.trials[i].alice_outcome);
    CHECK(a.trials[i].bob_value == b.trials[i].bob_value);
    CHECK(a.trials[i].bob_ray == b.trials[i].bob_ray);
  }
  CHECK(a.out_of_context_detections == b.out_of_context_detections);
}
