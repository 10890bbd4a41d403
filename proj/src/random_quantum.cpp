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

#include "weakcollapse/random_quantum.hpp"

#include <vector>

#include <Eigen/QR>

namespace weakcollapse {

using Index = Eigen::Index;

Vector random_gaussian_vector(std::size_t dim, Rng& rng) {
  Vector v(static_cast<Index>(dim));
  for (Index i = 0; i < v.size(); ++i) v[i] = Complex(standard_normal(rng), standard_normal(rng));
  return v;
}

StateVector random_state(std::size_t dim, Rng& rng) {
  return StateVector::normalized(random_gaussian_vector(dim, rng));
}

Matrix random_unitary(std::size_t dim, Rng& rng) {
  Matrix g(static_cast<Index>(dim), static_cast<Index>(dim));
  for (Index c = 0; c < g.cols(); ++c) g.col(c) = random_gaussian_vector(dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(g.rows(), g.cols());
}

ProjectiveMeasurement random_basis_measurement(std::size_t dim, Rng& rng) {
  const Matrix u = random_unitary(dim, rng);
  std::vector<Vector> basis;
  basis.reserve(dim);
  for (Index c = 0; c < u.cols(); ++c) basis.emplace_back(u.col(c));
  return ProjectiveMeasurement::from_basis(basis);
}

DensityOperator random_density(std::size_t dim, std::size_t rank, Rng& rng) {
  Matrix rho = Matrix::Zero(static_cast<Index>(dim), static_cast<Index>(dim));
  double total = 0.0;
  std::vector<double> weights(rank);
  for (double& w : weights) total += (w = uniform_open01(rng));
  for (std::size_t r = 0; r < rank; ++r) {
    const StateVector s = random_state(dim, rng);
    rho += (weights[r] / total) * (s.amplitudes() * s.amplitudes().adjoint());
  }
  // Symmetrize away rounding so the Hermiticity check sees exact symmetry.
  return DensityOperator(Matrix(0.5 * (rho + rho.adjoint())));
}

Matrix random_hermitian(std::size_t dim, Rng& rng) {
  Matrix g(static_cast<Index>(dim), static_cast<Index>(dim));
  for (Index c = 0; c < g.cols(); ++c) g.col(c) = random_gaussian_vector(dim, rng);
  return 0.5 * (g + g.adjoint());
}

}  // namespace weakcollapse
