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

// Seeded generators of random quantum instances: Haar-like states, unitaries
// and measurement bases, mixed states and Hermitian operators. Used by the
// property tests and by the acceptance harness.

#include <cstddef>

#include "weakcollapse/quantum.hpp"
#include "weakcollapse/rng.hpp"

namespace weakcollapse {

Vector random_gaussian_vector(std::size_t dim, Rng& rng);
StateVector random_state(std::size_t dim, Rng& rng);
/// Unitary from the QR decomposition of a complex Gaussian matrix.
Matrix random_unitary(std::size_t dim, Rng& rng);
/// Rank-1 measurement in the columns of a random unitary.
ProjectiveMeasurement random_basis_measurement(std::size_t dim, Rng& rng);
/// Mixture of `rank` random pure states with random weights.
DensityOperator random_density(std::size_t dim, std::size_t rank, Rng& rng);
Matrix random_hermitian(std::size_t dim, Rng& rng);

}  // namespace weakcollapse
