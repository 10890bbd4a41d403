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

#include "weakcollapse/energy.hpp"

#include <cmath>
#include <string>

#include "weakcollapse/errors.hpp"

namespace weakcollapse {

Hamiltonian::Hamiltonian(Matrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    throw DimensionMismatch("Hamiltonian must be a non-empty square matrix");
  }
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kTolerance) {
    throw InvalidState("Hamiltonian is not Hermitian");
  }
}

Hamiltonian Hamiltonian::diagonal(std::span<const double> energies) {
  Matrix h = Matrix::Zero(static_cast<Eigen::Index>(energies.size()),
                          static_cast<Eigen::Index>(energies.size()));
  for (std::size_t i = 0; i < energies.size(); ++i) {
    h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = energies[i];
  }
  return Hamiltonian(std::move(h));
}

double energy_expectation(const DensityOperator& rho, const Hamiltonian& h) {
  if (rho.dim() != h.dim()) throw DimensionMismatch("state and Hamiltonian dimensions differ");
  return (h.matrix() * rho.matrix()).trace().real();
}

bool commutation_check(const ProjectiveMeasurement& m, std::span<const double> eigenvalues,
                       const Hamiltonian& h) {
  if (m.dim() != h.dim()) throw DimensionMismatch("measurement and Hamiltonian dimensions differ");
  if (eigenvalues.size() != m.outcomes()) {
    throw DimensionMismatch("expected " + std::to_string(m.outcomes()) + " eigenvalues, got " +
                            std::to_string(eigenvalues.size()));
  }
  Matrix observable = Matrix::Zero(h.matrix().rows(), h.matrix().cols());
  for (std::size_t j = 0; j < m.outcomes(); ++j) observable += eigenvalues[j] * m.projector(j);
  const Matrix commutator = observable * h.matrix() - h.matrix() * observable;
  return commutator.cwiseAbs().maxCoeff() < kTolerance;
}

EnergyAudit audit_measurement(const DensityOperator& rho, const ProjectiveMeasurement& m,
                              std::span<const double> eigenvalues, const Hamiltonian& h,
                              const std::optional<ProbabilityDistribution>& weights) {
  EnergyAudit audit;
  audit.commutes = commutation_check(m, eigenvalues, h);
  audit.weights_were_born = true;
  if (weights) {
    if (weights->size() != m.outcomes()) throw DimensionMismatch("one weight per outcome expected");
    for (std::size_t j = 0; j < m.outcomes(); ++j) {
      const double born = (m.projector(j) * rho.matrix()).trace().real();
      if (std::abs((*weights)[j] - born) > kTolerance) audit.weights_were_born = false;
    }
  }
  audit.e_before = energy_expectation(rho, h);
  audit.e_after = energy_expectation(nonselective_update(rho, m, weights), h);
  audit.delta = audit.e_after - audit.e_before;
  return audit;
}

}  // namespace weakcollapse
