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

// Mean-energy bookkeeping across a non-selective projective measurement.
// Conservation is Tr(H rho) == Tr(H rho'); it holds for measurements that
// commute with H when outcomes follow the Born rule, and generally fails once
// the outcome weights deviate from Born.

#include <optional>
#include <span>

#include "weakcollapse/quantum.hpp"

namespace weakcollapse {

class Hamiltonian {
 public:
  /// Throws InvalidState unless Hermitian within 1e-10.
  explicit Hamiltonian(Matrix matrix);
  static Hamiltonian diagonal(std::span<const double> energies);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  const Matrix& matrix() const noexcept { return matrix_; }

 private:
  Matrix matrix_;
};

struct EnergyAudit {
  double e_before = 0.0;
  double e_after = 0.0;
  double delta = 0.0;
  bool commutes = false;
  /// True when no weights were given or they match Tr(M_j rho) within 1e-10.
  bool weights_were_born = true;
};

/// Tr(H rho).
double energy_expectation(const DensityOperator& rho, const Hamiltonian& h);

/// ||[sum_j m_j M_j, H]||_max < 1e-10.
bool commutation_check(const ProjectiveMeasurement& m, std::span<const double> eigenvalues,
                       const Hamiltonian& h);

EnergyAudit audit_measurement(const DensityOperator& rho, const ProjectiveMeasurement& m,
                              std::span<const double> eigenvalues, const Hamiltonian& h,
                              const std::optional<ProbabilityDistribution>& weights = {});

}  // namespace weakcollapse
