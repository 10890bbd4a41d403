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

// Kochen-Specker contexts in dimension 4, the non-colorability checks, the
// maximally entangled two-party state shared across contexts, and the trial
// protocol where Alice measures a whole context and Bob a single ray.
//
// Rays are exact integer directions. Orthogonality and identity are decided
// in integer arithmetic; unit vectors are formed only when a quantum state or
// measurement is built from a ray.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weakcollapse/parallel.hpp"
#include "weakcollapse/policy.hpp"
#include "weakcollapse/quantum.hpp"
#include "weakcollapse/rng.hpp"

namespace weakcollapse::ks {

inline constexpr std::size_t kRayDim = 4;
inline constexpr std::size_t kContextSize = 4;

class Ray {
 public:
  /// Canonicalizes: divides out the gcd and makes the first nonzero
  /// component positive. Throws InvalidTable for the zero vector.
  explicit Ray(std::array<int, kRayDim> components);

  const std::array<int, kRayDim>& components() const noexcept { return c_; }
  long dot(const Ray& other) const noexcept;
  long norm2() const noexcept { return dot(*this); }
  Vector unit_vector() const;
  std::string to_string() const;

  friend auto operator<=>(const Ray&, const Ray&) = default;

 private:
  std::array<int, kRayDim> c_;
};

/// "(a,b,c,d)"; whitespace allowed, brackets required.
Ray parse_ray(std::string_view text);

struct Context {
  std::array<Ray, kContextSize> rays;
};

struct Occurrence {
  std::size_t context;
  std::size_t position;
};

class KSTable {
 public:
  explicit KSTable(std::vector<Context> contexts);

  const std::vector<Context>& contexts() const noexcept { return contexts_; }
  /// Canonical ray -> every (context, position) where it appears.
  const std::map<Ray, std::vector<Occurrence>>& ray_index() const noexcept { return index_; }
  std::size_t distinct_rays() const noexcept { return index_.size(); }

 private:
  std::vector<Context> contexts_;
  std::map<Ray, std::vector<Occurrence>> index_;
};

struct TableViolation {
  enum class Kind { NotOrthogonal, ContextCount, DistinctRayCount, Multiplicity };
  Kind kind;
  std::optional<std::size_t> context;
  std::optional<Ray> ray;
  std::string message;
};

/// The 9-context, 18-ray table with every ray in exactly two contexts.
KSTable builtin_ks_table();

/// Per-context checks only: the four rays of each context are pairwise
/// orthogonal. This is the precondition of the search and parity routines.
std::vector<TableViolation> validate_contexts(const KSTable& table);

/// validate_contexts plus the whole-table structure: 9 contexts, 18 distinct
/// rays, each ray in exactly 2 contexts.
std::vector<TableViolation> validate_table(const KSTable& table);

struct ColoringResult {
  bool colorable = false;
  std::uint64_t assignments_found = 0;
  std::uint64_t search_space_size = 0;
};

/// Enumerates every choice of one value-1 ray per context (4^contexts) and
/// counts the choices that give each ray the same value in all contexts
/// containing it. OpenMP-parallel over the choice index.
ColoringResult ks_coloring_search(const KSTable& table);

/// Reference implementation of the same search: serial, one ray-value map
/// per candidate. Kept for cross-checking the parallel kernel.
ColoringResult ks_coloring_search_serial(const KSTable& table);

/// True iff the context count is odd and every ray has even multiplicity,
/// which together rule out any coloring without search.
bool parity_certificate(const KSTable& table);

std::string format_table(const KSTable& table);
/// One context per line, four parenthesized rays per line; '#' starts a
/// comment. Throws ParseError.
KSTable parse_table(std::string_view text);

/// (1/2) sum_k |k>|k> on 4 x 4.
StateVector twin_state();

/// C(a, b) = (<v_a| x <v_b|) |shared> for the normalized rays of `context`.
Matrix context_coefficients(const StateVector& shared, const Context& context);

ProjectiveMeasurement context_measurement(const Context& context);

enum class AliceValue { Zero, One, NotInContext };

struct FwtTrial {
  std::size_t alice_context = 0;  // 0-based
  std::size_t bob_ray = 0;        // index into the table's distinct rays
  std::size_t alice_outcome = 0;  // position within the context
  AliceValue alice_value = AliceValue::NotInContext;
  int bob_value = 0;
  bool forbidden_attempted = false;

  bool in_context() const noexcept { return alice_value != AliceValue::NotInContext; }
  bool agrees() const noexcept {
    return in_context() && (alice_value == AliceValue::One) == (bob_value == 1);
  }
};

/// Measurements for one table, built once and shared by all trials.
class FwtProtocol {
 public:
  explicit FwtProtocol(KSTable table);

  const KSTable& table() const noexcept { return table_; }
  const std::vector<Ray>& rays() const noexcept { return rays_; }
  std::optional<std::size_t> ray_id(const Ray& ray) const;

  /// Alice measures the shared state in `context` under `alice_policy`; Bob
  /// then measures {P_k, I - P_k} with Born sampling on his collapsed half.
  FwtTrial trial(std::size_t context, std::size_t bob_ray, CollapsePolicy& alice_policy,
                 Rng& rng) const;

  /// Detection probability for Bob's ray given Alice's outcome ray.
  double overlap2(std::size_t bob_ray, std::size_t context, std::size_t position) const;

 private:
  KSTable table_;
  std::vector<Ray> rays_;
  StateVector shared_;
  std::vector<ProjectiveMeasurement> alice_;
  std::vector<ProjectiveMeasurement> bob_;
};

/// Convenience over a protocol built from the builtin table.
FwtTrial fwt_trial(std::size_t context, const Ray& bob_ray, CollapsePolicy& alice_policy, Rng& rng);

enum class RaySelection { InContext, Any };

struct FwtSettings {
  std::optional<std::size_t> context;  // fixed context, else uniform per trial
  std::optional<std::size_t> bob_ray;  // fixed ray id, else drawn per `selection`
  RaySelection selection = RaySelection::InContext;
};

struct FwtSummary {
  std::vector<FwtTrial> trials;
  std::uint64_t in_context = 0;
  std::uint64_t agreements = 0;
  std::uint64_t out_of_context = 0;
  std::uint64_t out_of_context_detections = 0;
  double out_of_context_expected = 0.0;  // sum of analytic detection probabilities
  double out_of_context_variance = 0.0;
  std::uint64_t forbidden_attempts = 0;
};

/// Runs `trials` seeded trials. Scripted policies run serially with one
/// shared cursor; every other policy runs on the parallel trial runner.
FwtSummary fwt_experiment(const FwtProtocol& protocol, const FwtSettings& settings,
                          const CollapsePolicy& policy, std::uint64_t trials, std::uint64_t seed,
                          Execution exec = Execution::Parallel);

}  // namespace weakcollapse::ks
