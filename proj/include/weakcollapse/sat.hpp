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

// Satisfiability decided by forcing a flag qubit. The register state is
// 2^{-n/2} sum_j |j>|f(j)>; a first-order policy forces the flag to |1>,
// which weak compatibility permits iff some j has f(j) = 1. A Born
// measurement of the input register then yields a witness.
//
// The simulator evaluates f on every input to build the state, so nothing
// here says anything about complexity; `classical_brute_force` is the
// independent cross-check.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "weakcollapse/quantum.hpp"
#include "weakcollapse/rng.hpp"

namespace weakcollapse::sat {

inline constexpr unsigned kMaxVariables = 12;

class OracleFunction {
 public:
  /// `table[j]` is f(j); the table must have exactly 2^n entries, each 0 or 1.
  /// Throws TooLarge for n > 12.
  OracleFunction(unsigned n, std::vector<std::uint8_t> table);

  unsigned n() const noexcept { return n_; }
  std::uint64_t domain_size() const noexcept { return table_.size(); }
  bool operator()(std::uint64_t j) const { return table_.at(j) != 0; }
  const std::vector<std::uint8_t>& table() const noexcept { return table_; }
  std::uint64_t count_satisfying() const noexcept;

 private:
  unsigned n_;
  std::vector<std::uint8_t> table_;
};

struct SatResult {
  bool satisfiable = false;
  std::optional<std::uint64_t> witness;
  std::uint64_t queries_quantum = 0;
  std::uint64_t queries_classical_oracle = 0;
};

struct Cnf {
  unsigned variables = 0;
  std::vector<std::vector<int>> clauses;
};

/// A string of 2^n characters '0'/'1'; character j is f(j). Whitespace is
/// ignored and '#' starts a comment.
OracleFunction parse_truth_table(std::string_view text);
/// DIMACS CNF: 'c' comment lines, one 'p cnf <vars> <clauses>' header,
/// clauses as signed literals terminated by 0 (the terminator of the last
/// clause may be omitted). The clause count must match the header.
Cnf parse_dimacs(std::string_view text);
/// Variable v (1-based) is bit v-1 of j; f(j) = 1 iff every clause holds.
OracleFunction compile_cnf(const Cnf& cnf);

OracleFunction random_oracle(unsigned n, double density, Rng& rng);

/// Amplitude 2^{-n/2} at index 2j + f(j).
StateVector build_sat_state(const OracleFunction& f);

SatResult decide_sat(const OracleFunction& f, Rng& rng);
/// Linear scan; the witness is the first satisfying input.
SatResult classical_brute_force(const OracleFunction& f);

}  // namespace weakcollapse::sat
