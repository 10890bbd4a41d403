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

#include "weakcollapse/sat.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "weakcollapse/errors.hpp"
#include "weakcollapse/policy.hpp"
#include "weakcollapse/text.hpp"

namespace weakcollapse::sat {
namespace {

ProjectiveMeasurement flag_measurement(unsigned n) {
  std::vector<std::size_t> labels(std::size_t{2} << n);
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = i & 1U;
  return ProjectiveMeasurement::partition(std::move(labels), 2);
}

ProjectiveMeasurement input_measurement(unsigned n) {
  std::vector<std::size_t> labels(std::size_t{2} << n);
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = i >> 1U;
  return ProjectiveMeasurement::partition(std::move(labels), std::size_t{1} << n);
}

}  // namespace

OracleFunction::OracleFunction(unsigned n, std::vector<std::uint8_t> table)
    : n_(n), table_(std::move(table)) {
  if (n_ == 0) throw BadParameter("oracle needs at least one input bit");
  if (n_ > kMaxVariables) {
    throw TooLarge("n = " + std::to_string(n_) + " exceeds the cap n <= " +
                   std::to_string(kMaxVariables));
  }
  if (table_.size() != (std::size_t{1} << n_)) {
    throw LengthMismatch("truth table must have 2^n = " + std::to_string(std::size_t{1} << n_) +
                         " entries");
  }
  for (auto v : table_) {
    if (v > 1) throw BadParameter("truth table entries must be 0 or 1");
  }
}

std::uint64_t OracleFunction::count_satisfying() const noexcept {
  std::uint64_t count = 0;
  for (auto v : table_) count += v;
  return count;
}

OracleFunction parse_truth_table(std::string_view text) {
  std::vector<std::uint8_t> bits;
  for (auto line : split(text, '\n')) {
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    for (char ch : line) {
      if (ch == '0' || ch == '1') {
        bits.push_back(static_cast<std::uint8_t>(ch - '0'));
      } else if (ch != ' ' && ch != '\t' && ch != '\r') {
        throw ParseError(std::string("unexpected character '") + ch + "' in truth table");
      }
    }
  }
  if (bits.size() < 2 || (bits.size() & (bits.size() - 1)) != 0) {
    throw ParseError("truth table length " + std::to_string(bits.size()) +
                     " is not a power of two >= 2");
  }
  unsigned n = 0;
  while ((std::size_t{1} << n) < bits.size()) ++n;
  if (n > kMaxVariables) throw TooLarge("truth table needs n = " + std::to_string(n) + " > 12");
  return OracleFunction(n, std::move(bits));
}

Cnf parse_dimacs(std::string_view text) {
  Cnf cnf;
  bool header = false;
  std::size_t declared = 0;
  std::vector<int> clause;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == 'c' || line.front() == '%') continue;
    std::istringstream in{std::string(line)};
    if (line.front() == 'p') {
      std::string p, fmt;
      long vars = -1, clauses = -1;
      in >> p >> fmt >> vars >> clauses;
      if (header || fmt != "cnf" || vars < 1 || clauses < 0) {
        throw ParseError("line " + std::to_string(line_no) + ": bad 'p cnf' header");
      }
      if (vars > static_cast<long>(kMaxVariables)) {
        throw TooLarge("CNF has " + std::to_string(vars) + " variables; the cap is 12");
      }
      cnf.variables = static_cast<unsigned>(vars);
      declared = static_cast<std::size_t>(clauses);
      header = true;
      continue;
    }
    if (!header) throw ParseError("line " + std::to_string(line_no) + ": clause before header");
    std::string token;
    while (in >> token) {
      const auto lit = parse_int(token, "literal");
      if (lit == 0) {
        cnf.clauses.push_back(std::move(clause));
        clause.clear();
        continue;
      }
      if (static_cast<unsigned long>(std::llabs(lit)) > cnf.variables) {
        throw ParseError("line " + std::to_string(line_no) + ": literal out of range");
      }
      clause.push_back(static_cast<int>(lit));
    }
  }
  if (!header) throw ParseError("missing 'p cnf' header");
  if (!clause.empty()) cnf.clauses.push_back(std::move(clause));
  if (cnf.clauses.size() != declared) {
    throw ParseError("header declares " + std::to_string(declared) + " clauses, found " +
                     std::to_string(cnf.clauses.size()));
  }
  return cnf;
}

OracleFunction compile_cnf(const Cnf& cnf) {
  if (cnf.variables > kMaxVariables) throw TooLarge("CNF exceeds 12 variables");
  std::vector<std::uint8_t> table(std::size_t{1} << cnf.variables);
  for (std::uint64_t j = 0; j < table.size(); ++j) {
    bool all = true;
    for (const auto& clause : cnf.clauses) {
      bool any = false;
      for (int lit : clause) {
        const bool bit = (j >> (std::abs(lit) - 1)) & 1U;
        if (lit > 0 ? bit : !bit) {
          any = true;
          break;
        }
      }
      if (!any) {
        all = false;
        break;
      }
    }
    table[j] = all ? 1 : 0;
  }
  return OracleFunction(cnf.variables, std::move(table));
}

OracleFunction random_oracle(unsigned n, double density, Rng& rng) {
  if (n == 0 || n > kMaxVariables) throw TooLarge("n must be in [1, 12]");
  if (!(density >= 0.0 && density <= 1.0)) throw BadParameter("density must be in [0, 1]");
  std::vector<std::uint8_t> table(std::size_t{1} << n);
  for (auto& v : table) v = uniform01(rng) < density ? 1 : 0;
  return OracleFunction(n, std::move(table));
}

StateVector build_sat_state(const OracleFunction& f) {
  const std::size_t inputs = f.domain_size();
  Vector v = Vector::Zero(static_cast<Eigen::Index>(2 * inputs));
  const double amp = 1.0 / std::sqrt(static_cast<double>(inputs));
  for (std::uint64_t j = 0; j < inputs; ++j) {
    v[static_cast<Eigen::Index>(2 * j + (f(j) ? 1 : 0))] = amp;
  }
  return StateVector::normalized(std::move(v));
}

SatResult decide_sat(const OracleFunction& f, Rng& rng) {
  SatResult result;
  result.queries_quantum = f.domain_size();
  const StateVector state = build_sat_state(f);
  const ProjectiveMeasurement flag = flag_measurement(f.n());
  CollapsePolicy force_one = ForcedPolicy{1};
  OutcomeSample forced;
  try {
    forced = sample_outcome(force_one, state, flag, rng);
  } catch (const ForbiddenOutcome&) {
    return result;
  }
  const StateVector flagged = collapse(state, flag, forced.outcome);
  const ProjectiveMeasurement input = input_measurement(f.n());
  const ProbabilityDistribution born = born_distribution(flagged, input);
  const std::uint64_t witness = sample_index(born.probs(), rng);
  ++result.queries_classical_oracle;
  if (!f(witness)) throw InvalidState("witness " + std::to_string(witness) + " failed verification");
  result.satisfiable = true;
  result.witness = witness;
  return result;
}

SatResult classical_brute_force(const OracleFunction& f) {
  SatResult result;
  for (std::uint64_t j = 0; j < f.domain_size(); ++j) {
    ++result.queries_classical_oracle;
    if (f(j)) {
      result.satisfiable = true;
      result.witness = j;
      break;
    }
  }
  return result;
}

}  // namespace weakcollapse::sat
