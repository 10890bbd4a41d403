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

// Exact finite-dimensional quantum states and projective measurements.
//
// All types are immutable after construction. Measurements carry one of three
// internal representations: dense projector matrices (small systems), a
// partition of the computational basis (diagonal projectors, used for
// registers of large states), or a measurement local to one side of a
// bipartite system. Callers never see the difference; `projector()` always
// materializes the dense matrix when one is needed.

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace weakcollapse {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Born probabilities at or below this value are treated as exact zeros.
inline constexpr double kForbiddenThreshold = 1e-12;
/// Tolerance for normalization, Hermiticity, trace and projector identities.
inline constexpr double kTolerance = 1e-10;
inline constexpr std::size_t kMaxDimension = std::size_t{1} << 13;

class StateVector {
 public:
  /// Normalizes `amplitudes`; throws ZeroVector if every entry is below 1e-12.
  static StateVector normalized(Vector amplitudes);
  static StateVector basis(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
  const Vector& amplitudes() const noexcept { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_[static_cast<Eigen::Index>(i)]; }

 private:
  explicit StateVector(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {}
  Vector amplitudes_;
};

class DensityOperator {
 public:
  /// Validates Hermiticity, unit trace and positivity within 1e-10.
  explicit DensityOperator(Matrix matrix);
  static DensityOperator pure(const StateVector& s);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  const Matrix& matrix() const noexcept { return matrix_; }
  double purity() const;

 private:
  Matrix matrix_;
};

class ProbabilityDistribution {
 public:
  /// Entries must be non-negative and sum to 1 within 1e-10.
  explicit ProbabilityDistribution(std::vector<double> probs);

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_.at(i); }
  std::span<const double> probs() const noexcept { return probs_; }

 private:
  std::vector<double> probs_;
};

struct Subsystems {
  std::size_t a;
  std::size_t b;
  std::size_t total() const noexcept { return a * b; }
};

enum class Side { A, B };

class ProjectiveMeasurement {
 public:
  /// Rank-1 projectors onto |0>, ..., |dim-1>.
  static ProjectiveMeasurement computational(std::size_t dim);
  /// Rank-1 projectors onto the given vectors, each normalized first.
  /// Throws InvalidMeasurement unless they form an orthonormal basis.
  static ProjectiveMeasurement from_basis(std::span<const Vector> basis);
  /// Throws InvalidMeasurement unless the projector identities hold.
  static ProjectiveMeasurement from_projectors(std::vector<Matrix> projectors);
  /// Two-outcome measurement {|v><v|, I - |v><v|}.
  static ProjectiveMeasurement binary(const Vector& ray);
  /// Diagonal projectors: basis index i belongs to outcome labels[i].
  static ProjectiveMeasurement partition(std::vector<std::size_t> labels, std::size_t outcomes);
  /// `inner` applied to one factor of a bipartite system.
  static ProjectiveMeasurement local(const ProjectiveMeasurement& inner, Subsystems dims, Side side);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t outcomes() const noexcept { return outcomes_; }

  /// M_outcome |v>.
  Vector apply(std::size_t outcome, const Vector& v) const;
  /// ||M_j v||^2 for every outcome j.
  std::vector<double> weights(const Vector& v) const;
  /// Dense matrix of M_outcome.
  Matrix projector(std::size_t outcome) const;

 private:
  struct Dense {
    std::vector<Matrix> projectors;
    // Unit vectors u_j with projectors[j] = u_j u_j^dagger, when every
    // projector is rank 1; lets weights() and apply() skip the matrix product.
    std::vector<Vector> rays;
  };
  struct Partition {
    std::vector<std::size_t> labels;
  };
  struct Local {
    std::shared_ptr<const ProjectiveMeasurement> inner;
    Subsystems dims;
    Side side;
  };

  ProjectiveMeasurement(std::size_t dim, std::size_t outcomes,
                        std::variant<Dense, Partition, Local> rep)
      : dim_(dim), outcomes_(outcomes), rep_(std::move(rep)) {}

  std::size_t dim_;
  std::size_t outcomes_;
  std::variant<Dense, Partition, Local> rep_;
};

StateVector make_state(std::span<const Complex> amplitudes);
StateVector make_state(std::initializer_list<Complex> amplitudes);

/// Amplitude at index j * b.dim() + k is a[j] * b[k].
StateVector tensor(const StateVector& a, const StateVector& b);

/// probs[j] = <s|M_j|s>, clipped to [0, 1].
ProbabilityDistribution born_distribution(const StateVector& s, const ProjectiveMeasurement& m);

/// M_outcome|s> renormalized. Throws ForbiddenOutcome if the outcome has
/// Born probability <= 1e-12.
StateVector collapse(const StateVector& s, const ProjectiveMeasurement& m, std::size_t outcome);

/// Without weights: sum_j M_j rho M_j. With weights w:
/// sum_j w_j M_j rho M_j / Tr(M_j rho M_j) over outcomes with nonzero Born
/// probability. Throws ForbiddenOutcome if w puts mass on a zero-Born outcome.
DensityOperator nonselective_update(const DensityOperator& rho, const ProjectiveMeasurement& m,
                                    const std::optional<ProbabilityDistribution>& weights = {});

/// Partial trace of |s><s| over the discarded factor.
DensityOperator reduced_state(const StateVector& s, Subsystems dims, Side keep);

Complex inner_product(const StateVector& a, const StateVector& b);
/// |<a|b>| = 1 within `tol`, i.e. equal up to global phase.
bool same_ray(const StateVector& a, const StateVector& b, double tol = kTolerance);

}  // namespace weakcollapse
