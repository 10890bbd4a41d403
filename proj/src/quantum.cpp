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

#include "weakcollapse/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "weakcollapse/errors.hpp"

namespace weakcollapse {
namespace {

using Index = Eigen::Index;

void check_dimension(std::size_t dim) {
  if (dim == 0) throw DimensionMismatch("dimension must be at least 1");
  if (dim > kMaxDimension) {
    throw TooLarge("dimension " + std::to_string(dim) + " exceeds " +
                   std::to_string(kMaxDimension));
  }
}

void check_same_dim(std::size_t expected, std::size_t actual, const char* what) {
  if (expected != actual) {
    throw DimensionMismatch(std::string(what) + ": expected dimension " +
                            std::to_string(expected) + ", got " + std::to_string(actual));
  }
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Reshape a bipartite vector into its a x b coefficient matrix.
Matrix coefficients(const Vector& v, Subsystems dims) {
  Matrix c(static_cast<Index>(dims.a), static_cast<Index>(dims.b));
  for (std::size_t j = 0; j < dims.a; ++j)
    for (std::size_t k = 0; k < dims.b; ++k)
      c(static_cast<Index>(j), static_cast<Index>(k)) = v[static_cast<Index>(j * dims.b + k)];
  return c;
}

Vector flatten(const Matrix& c) {
  Vector v(c.size());
  for (Index j = 0; j < c.rows(); ++j)
    for (Index k = 0; k < c.cols(); ++k) v[j * c.cols() + k] = c(j, k);
  return v;
}

Matrix apply_to_columns(const ProjectiveMeasurement& m, std::size_t outcome, const Matrix& x) {
  Matrix out(x.rows(), x.cols());
  for (Index c = 0; c < x.cols(); ++c) out.col(c) = m.apply(outcome, x.col(c));
  return out;
}

// M rho M for Hermitian M, using only M|v>.
Matrix sandwich(const ProjectiveMeasurement& m, std::size_t outcome, const Matrix& rho) {
  const Matrix left = apply_to_columns(m, outcome, rho);
  return apply_to_columns(m, outcome, left.adjoint()).adjoint();
}

}  // namespace

StateVector StateVector::normalized(Vector amplitudes) {
  check_dimension(static_cast<std::size_t>(amplitudes.size()));
  if (amplitudes.cwiseAbs().maxCoeff() < 1e-12) {
    throw ZeroVector("all amplitudes are below 1e-12 in magnitude");
  }
  amplitudes /= amplitudes.norm();
  return StateVector(std::move(amplitudes));
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
  check_dimension(dim);
  if (index >= dim) throw DimensionMismatch("basis index out of range");
  Vector v = Vector::Zero(static_cast<Index>(dim));
  v[static_cast<Index>(index)] = 1.0;
  return StateVector(std::move(v));
}

DensityOperator::DensityOperator(Matrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw DimensionMismatch("density matrix must be square");
  check_dimension(static_cast<std::size_t>(matrix_.rows()));
  if (max_abs(matrix_ - matrix_.adjoint()) > kTolerance) {
    throw InvalidState("density matrix is not Hermitian");
  }
  if (std::abs(matrix_.trace() - Complex(1.0)) > kTolerance) {
    throw InvalidState("density matrix trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kTolerance) {
    throw InvalidState("density matrix has a negative eigenvalue");
  }
}

DensityOperator DensityOperator::pure(const StateVector& s) {
  return DensityOperator(s.amplitudes() * s.amplitudes().adjoint());
}

double DensityOperator::purity() const { return (matrix_ * matrix_).trace().real(); }

ProbabilityDistribution::ProbabilityDistribution(std::vector<double> probs)
    : probs_(std::move(probs)) {
  if (probs_.empty()) throw InvalidState("probability distribution is empty");
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw InvalidState("probability entries must be non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > kTolerance) {
    throw InvalidState("probabilities sum to " + std::to_string(total) + ", not 1");
  }
}

ProjectiveMeasurement ProjectiveMeasurement::computational(std::size_t dim) {
  check_dimension(dim);
  std::vector<std::size_t> labels(dim);
  for (std::size_t i = 0; i < dim; ++i) labels[i] = i;
  return ProjectiveMeasurement(dim, dim, Partition{std::move(labels)});
}

ProjectiveMeasurement ProjectiveMeasurement::from_basis(std::span<const Vector> basis) {
  if (basis.empty()) throw InvalidMeasurement("basis is empty");
  std::vector<Matrix> projectors;
  std::vector<Vector> rays;
  projectors.reserve(basis.size());
  for (const Vector& v : basis) {
    const double norm = v.norm();
    if (norm < 1e-12) throw InvalidMeasurement("basis vector is zero");
    rays.push_back(v / norm);
    projectors.push_back(rays.back() * rays.back().adjoint());
  }
  ProjectiveMeasurement m = from_projectors(std::move(projectors));
  std::get<Dense>(m.rep_).rays = std::move(rays);
  return m;
}

ProjectiveMeasurement ProjectiveMeasurement::from_projectors(std::vector<Matrix> projectors) {
  if (projectors.empty()) throw InvalidMeasurement("no projectors");
  const auto dim = static_cast<std::size_t>(projectors.front().rows());
  check_dimension(dim);
  Matrix sum = Matrix::Zero(static_cast<Index>(dim), static_cast<Index>(dim));
  for (std::size_t j = 0; j < projectors.size(); ++j) {
    const Matrix& p = projectors[j];
    if (static_cast<std::size_t>(p.rows()) != dim || static_cast<std::size_t>(p.cols()) != dim) {
      throw InvalidMeasurement("projector " + std::to_string(j) + " has the wrong shape");
    }
    if (max_abs(p - p.adjoint()) > kTolerance) {
      throw InvalidMeasurement("projector " + std::to_string(j) + " is not Hermitian");
    }
    if (max_abs(p * p - p) > kTolerance) {
      throw InvalidMeasurement("projector " + std::to_string(j) + " is not idempotent");
    }
    for (std::size_t k = 0; k < j; ++k) {
      if (max_abs(p * projectors[k]) > kTolerance) {
        throw InvalidMeasurement("projectors " + std::to_string(k) + " and " + std::to_string(j) +
                                 " are not orthogonal");
      }
    }
    sum += p;
  }
  if (max_abs(sum - Matrix::Identity(sum.rows(), sum.cols())) > kTolerance) {
    throw InvalidMeasurement("projectors do not sum to the identity");
  }
  const std::size_t outcomes = projectors.size();
  return ProjectiveMeasurement(dim, outcomes, Dense{std::move(projectors), {}});
}

ProjectiveMeasurement ProjectiveMeasurement::binary(const Vector& ray) {
  const double norm = ray.norm();
  if (norm < 1e-12) throw InvalidMeasurement("ray is zero");
  const Vector u = ray / norm;
  Matrix hit = u * u.adjoint();
  Matrix miss = Matrix::Identity(hit.rows(), hit.cols()) - hit;
  return from_projectors({std::move(hit), std::move(miss)});
}

ProjectiveMeasurement ProjectiveMeasurement::partition(std::vector<std::size_t> labels,
                                                       std::size_t outcomes) {
  check_dimension(labels.size());
  if (outcomes == 0) throw InvalidMeasurement("partition needs at least one outcome");
  for (std::size_t label : labels) {
    if (label >= outcomes) throw InvalidMeasurement("partition label out of range");
  }
  const std::size_t dim = labels.size();
  return ProjectiveMeasurement(dim, outcomes, Partition{std::move(labels)});
}

ProjectiveMeasurement ProjectiveMeasurement::local(const ProjectiveMeasurement& inner,
                                                   Subsystems dims, Side side) {
  check_dimension(dims.total());
  check_same_dim(side == Side::A ? dims.a : dims.b, inner.dim(), "local measurement");
  return ProjectiveMeasurement(dims.total(), inner.outcomes(),
                               Local{std::make_shared<const ProjectiveMeasurement>(inner), dims, side});
}

Vector ProjectiveMeasurement::apply(std::size_t outcome, const Vector& v) const {
  check_same_dim(dim_, static_cast<std::size_t>(v.size()), "measurement");
  if (outcome >= outcomes_) throw DimensionMismatch("outcome index out of range");
  return std::visit(
      [&](const auto& rep) -> Vector {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, Dense>) {
          if (!rep.rays.empty()) return rep.rays[outcome] * rep.rays[outcome].dot(v);
          return rep.projectors[outcome] * v;
        } else if constexpr (std::is_same_v<T, Partition>) {
          Vector out = v;
          for (std::size_t i = 0; i < rep.labels.size(); ++i) {
            if (rep.labels[i] != outcome) out[static_cast<Index>(i)] = 0.0;
          }
          return out;
        } else {
          Matrix c = coefficients(v, rep.dims);
          if (rep.side == Side::A) {
            c = apply_to_columns(*rep.inner, outcome, c);
          } else {
            c = apply_to_columns(*rep.inner, outcome, c.transpose()).transpose();
          }
          return flatten(c);
        }
      },
      rep_);
}

std::vector<double> ProjectiveMeasurement::weights(const Vector& v) const {
  check_same_dim(dim_, static_cast<std::size_t>(v.size()), "measurement");
  std::vector<double> w(outcomes_, 0.0);
  if (const auto* part = std::get_if<Partition>(&rep_)) {
    for (std::size_t i = 0; i < part->labels.size(); ++i) {
      w[part->labels[i]] += std::norm(v[static_cast<Index>(i)]);
    }
    return w;
  }
  if (const auto* loc = std::get_if<Local>(&rep_)) {
    const Matrix c = coefficients(v, loc->dims);
    const Matrix factors = loc->side == Side::A ? c : Matrix(c.transpose());
    for (Index col = 0; col < factors.cols(); ++col) {
      const std::vector<double> part = loc->inner->weights(factors.col(col));
      for (std::size_t j = 0; j < outcomes_; ++j) w[j] += part[j];
    }
    return w;
  }
  const auto& dense = std::get<Dense>(rep_);
  for (std::size_t j = 0; j < outcomes_; ++j) {
    w[j] = dense.rays.empty() ? apply(j, v).squaredNorm() : std::norm(dense.rays[j].dot(v));
  }
  return w;
}

Matrix ProjectiveMeasurement::projector(std::size_t outcome) const {
  if (outcome >= outcomes_) throw DimensionMismatch("outcome index out of range");
  return std::visit(
      [&](const auto& rep) -> Matrix {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, Dense>) {
          return rep.projectors[outcome];
        } else if constexpr (std::is_same_v<T, Partition>) {
          Matrix p = Matrix::Zero(static_cast<Index>(dim_), static_cast<Index>(dim_));
          for (std::size_t i = 0; i < dim_; ++i) {
            if (rep.labels[i] == outcome) p(static_cast<Index>(i), static_cast<Index>(i)) = 1.0;
          }
          return p;
        } else {
          const Matrix inner = rep.inner->projector(outcome);
          const auto other = static_cast<Index>(rep.side == Side::A ? rep.dims.b : rep.dims.a);
          const Matrix id = Matrix::Identity(other, other);
          const Matrix& left = rep.side == Side::A ? inner : id;
          const Matrix& right = rep.side == Side::A ? id : inner;
          Matrix p(left.rows() * right.rows(), left.cols() * right.cols());
          for (Index i = 0; i < left.rows(); ++i)
            for (Index j = 0; j < left.cols(); ++j)
              p.block(i * right.rows(), j * right.cols(), right.rows(), right.cols()) =
                  left(i, j) * right;
          return p;
        }
      },
      rep_);
}

StateVector make_state(std::span<const Complex> amplitudes) {
  Vector v(static_cast<Index>(amplitudes.size()));
  for (std::size_t i = 0; i < amplitudes.size(); ++i) v[static_cast<Index>(i)] = amplitudes[i];
  return StateVector::normalized(std::move(v));
}

StateVector make_state(std::initializer_list<Complex> amplitudes) {
  return make_state(std::span<const Complex>(amplitudes.begin(), amplitudes.size()));
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  check_dimension(a.dim() * b.dim());
  Vector v(static_cast<Index>(a.dim() * b.dim()));
  for (std::size_t j = 0; j < a.dim(); ++j)
    for (std::size_t k = 0; k < b.dim(); ++k) v[static_cast<Index>(j * b.dim() + k)] = a[j] * b[k];
  return StateVector::normalized(std::move(v));
}

ProbabilityDistribution born_distribution(const StateVector& s, const ProjectiveMeasurement& m) {
  check_same_dim(m.dim(), s.dim(), "born_distribution");
  std::vector<double> probs = m.weights(s.amplitudes());
  for (double& p : probs) p = std::clamp(p, 0.0, 1.0);
  return ProbabilityDistribution(std::move(probs));
}

StateVector collapse(const StateVector& s, const ProjectiveMeasurement& m, std::size_t outcome) {
  check_same_dim(m.dim(), s.dim(), "collapse");
  if (outcome >= m.outcomes()) throw DimensionMismatch("outcome index out of range");
  Vector projected = m.apply(outcome, s.amplitudes());
  if (projected.squaredNorm() <= kForbiddenThreshold) {
    throw ForbiddenOutcome("outcome " + std::to_string(outcome) + " has zero Born probability");
  }
  return StateVector::normalized(std::move(projected));
}

DensityOperator nonselective_update(const DensityOperator& rho, const ProjectiveMeasurement& m,
                                    const std::optional<ProbabilityDistribution>& weights) {
  check_same_dim(m.dim(), rho.dim(), "nonselective_update");
  if (weights) check_same_dim(m.outcomes(), weights->size(), "nonselective_update weights");
  Matrix out = Matrix::Zero(rho.matrix().rows(), rho.matrix().cols());
  for (std::size_t j = 0; j < m.outcomes(); ++j) {
    const Matrix block = sandwich(m, j, rho.matrix());
    const double born = block.trace().real();
    if (!weights) {
      out += block;
      continue;
    }
    const double w = (*weights)[j];
    if (born <= kForbiddenThreshold) {
      if (w > kForbiddenThreshold) {
        throw ForbiddenOutcome("weight on outcome " + std::to_string(j) +
                               " which has zero Born probability");
      }
      continue;
    }
    if (w > 0.0) out += (w / born) * block;
  }
  return DensityOperator(std::move(out));
}

DensityOperator reduced_state(const StateVector& s, Subsystems dims, Side keep) {
  check_same_dim(dims.total(), s.dim(), "reduced_state");
  const Matrix c = coefficients(s.amplitudes(), dims);
  if (keep == Side::A) return DensityOperator(c * c.adjoint());
  return DensityOperator(c.transpose() * c.conjugate());
}

Complex inner_product(const StateVector& a, const StateVector& b) {
  check_same_dim(a.dim(), b.dim(), "inner_product");
  return a.amplitudes().dot(b.amplitudes());
}

bool same_ray(const StateVector& a, const StateVector& b, double tol) {
  return a.dim() == b.dim() && std::abs(std::abs(inner_product(a, b)) - 1.0) <= tol;
}

}  // namespace weakcollapse
