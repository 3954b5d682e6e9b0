// Copyright 2026 The qst Authors
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

#include "qst/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

namespace qst {

const char* to_string(Violation v) {
  switch (v) {
    case Violation::non_finite: return "non-finite entries";
    case Violation::non_hermitian: return "not Hermitian";
    case Violation::negative_eigenvalue: return "negative eigenvalue";
    case Violation::trace: return "trace differs from 1";
    case Violation::completeness: return "effects do not sum to identity";
  }
  return "unknown";
}

ValidationError::ValidationError(std::vector<Violation> violations, const std::string& detail)
    : Error(detail), violations_(std::move(violations)) {}

bool ValidationError::has(Violation v) const {
  return std::find(violations_.begin(), violations_.end(), v) != violations_.end();
}

const char* to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::trace_distance: return "trace_distance";
    case MetricKind::frobenius_distance: return "frobenius_distance";
    case MetricKind::fidelity: return "fidelity";
  }
  return "unknown";
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

cplx inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("inner product of differently shaped matrices");
  }
  return (a.conjugate().cwiseProduct(b)).sum();
}

ComplexMatrix hermitian_part(const ComplexMatrix& h) {
  return (h + h.adjoint()) * 0.5;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

ComplexMatrix kron_all(std::span<const ComplexMatrix> factors) {
  if (factors.empty()) {
    throw InvalidArgument("kron_all needs at least one factor");
  }
  ComplexMatrix out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) {
    out = kron(out, factors[i]);
  }
  return out;
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  if (u.rows() != u.cols() || u.rows() == 0) return false;
  ComplexMatrix gram = u.adjoint() * u;
  return (gram - ComplexMatrix::Identity(u.rows(), u.cols())).norm() <= tol;
}

RealVector hermitian_eigenvalues(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw DimensionError(os.str());
  }
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << what << ": dimension mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows()
       << "x" << b.cols();
    throw DimensionError(os.str());
  }
}

// Eigen-decomposition based square root of a PSD matrix. Eigenvalues inside
// the round-off floor are zeroed so that rank-deficient inputs stay exactly
// rank-deficient.
ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m));
  RealVector lambda = es.eigenvalues();
  const double top = std::max(lambda.maxCoeff(), 0.0);
  const double floor = 8.0 * static_cast<double>(m.rows()) *
                       std::numeric_limits<double>::epsilon() * top;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    lambda[i] = lambda[i] > floor ? std::sqrt(lambda[i]) : 0.0;
  }
  return es.eigenvectors() * lambda.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

DensityMatrix density_from_pure(const PureState& psi, double tol) {
  if (psi.dim() == 0) throw DimensionError("density_from_pure: empty state vector");
  const double norm = psi.amplitudes.norm();
  if (std::abs(norm - 1.0) > tol) {
    std::ostringstream os;
    os << "density_from_pure: state norm " << norm << " differs from 1";
    throw NormalizationError(os.str());
  }
  return DensityMatrix::assume_valid(psi.amplitudes * psi.amplitudes.adjoint());
}

DensityMatrix density_from_mixture(std::span<const double> weights,
                                   std::span<const PureState> states, double tol) {
  if (weights.size() != states.size() || states.empty()) {
    throw DimensionError("density_from_mixture: need one weight per state and at least one state");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InvalidArgument("density_from_mixture: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > tol) {
    std::ostringstream os;
    os << "density_from_mixture: weights sum to " << total;
    throw InvalidArgument(os.str());
  }
  const Eigen::Index dim = states.front().dim();
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].dim() != dim) throw DimensionError("density_from_mixture: state dimension mismatch");
    rho += weights[i] * density_from_pure(states[i], tol).matrix();
  }
  return DensityMatrix::assume_valid(std::move(rho));
}

DensityMatrix validate_density(const ComplexMatrix& rho, const Tolerance& tol) {
  require_square(rho, "validate_density");
  if (!rho.allFinite()) {
    throw ValidationError({Violation::non_finite}, "validate_density: non-finite entries");
  }
  std::vector<Violation> violations;
  std::ostringstream detail;
  detail << "validate_density:";

  const double asym = (rho - rho.adjoint()).norm();
  if (asym > tol.hermitian) {
    violations.push_back(Violation::non_hermitian);
    detail << " ||rho - rho^dagger||_F = " << asym << ";";
  }
  const double min_eig = hermitian_eigenvalues(rho).minCoeff();
  if (min_eig < -tol.psd) {
    violations.push_back(Violation::negative_eigenvalue);
    detail << " min eigenvalue " << min_eig << ";";
  }
  const cplx tr = rho.trace();
  if (std::abs(tr - 1.0) > tol.trace) {
    violations.push_back(Violation::trace);
    detail << " trace " << tr.real() << (tr.imag() >= 0 ? "+" : "") << tr.imag() << "i;";
  }
  if (!violations.empty()) throw ValidationError(std::move(violations), detail.str());
  return DensityMatrix::assume_valid(rho);
}

DensityMatrix validate_density(const ComplexMatrix& rho, double tol) {
  return validate_density(rho, Tolerance::uniform(tol));
}

DensityMatrix maximally_mixed(Eigen::Index dim) {
  if (dim < 1) throw InvalidArgument("maximally_mixed: dim must be positive");
  return DensityMatrix::assume_valid(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

MetricValue fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  require_same_shape(rho1.matrix(), rho2.matrix(), "fidelity");
  const ComplexMatrix s = psd_sqrt(rho1.matrix());
  const ComplexMatrix inner_product = s * rho2.matrix() * s;
  RealVector mu = hermitian_eigenvalues(inner_product);
  const double top = std::max(mu.maxCoeff(), 0.0);
  const double floor = 8.0 * static_cast<double>(mu.size()) *
                       std::numeric_limits<double>::epsilon() * top;
  double root_sum = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    if (mu[i] > floor) root_sum += std::sqrt(mu[i]);
  }
  return {MetricKind::fidelity, std::clamp(root_sum * root_sum, 0.0, 1.0)};
}

double pure_state_fidelity(const PureState& psi, const DensityMatrix& rho) {
  if (psi.dim() != rho.dim()) throw DimensionError("pure_state_fidelity: dimension mismatch");
  return std::clamp((psi.amplitudes.adjoint() * rho.matrix() * psi.amplitudes)(0, 0).real(), 0.0, 1.0);
}

MetricValue trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "trace_distance");
  Eigen::JacobiSVD<ComplexMatrix> svd(a - b);
  return {MetricKind::trace_distance, svd.singularValues().sum()};
}

MetricValue trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return trace_distance(a.matrix(), b.matrix());
}

MetricValue frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "frobenius_distance");
  return {MetricKind::frobenius_distance, (a - b).norm()};
}

MetricValue frobenius_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return frobenius_distance(a.matrix(), b.matrix());
}

ComplexMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix z(rows, cols);
  // Fill row by row so the draw order does not depend on Eigen's storage order.
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = cplx(re, im);
    }
  }
  return z;
}

ComplexMatrix haar_random_unitary(Eigen::Index dim, Rng& rng) {
  if (dim < 1) throw InvalidArgument("haar_random_unitary: dim must be positive");
  const ComplexMatrix z = complex_gaussian(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  const ComplexMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const cplx d = r(j, j);
    const double mag = std::abs(d);
    const cplx phase = mag > 0.0 ? d / mag : cplx(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

ComplexMatrix haar_random_unitary(Eigen::Index dim, std::uint64_t seed) {
  Rng rng(seed);
  return haar_random_unitary(dim, rng);
}

PureState haar_random_pure_state(Eigen::Index dim, Rng& rng) {
  if (dim < 1) throw InvalidArgument("haar_random_pure_state: dim must be positive");
  ComplexVector v = complex_gaussian(dim, 1, rng).col(0);
  v /= v.norm();
  return {std::move(v)};
}

}  // namespace qst
