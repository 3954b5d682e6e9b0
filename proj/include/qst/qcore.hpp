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

#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qst/error.hpp"

namespace qst {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// All randomness in the toolkit flows through explicitly seeded generators.
using Rng = std::mt19937_64;

/// Child seed for stream `index` of a master seed (splitmix64 finalizer).
/// Stable across platforms and independent of evaluation order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

struct Tolerance {
  double hermitian = 1e-9;
  double trace = 1e-9;
  double psd = 1e-8;

  static Tolerance uniform(double tol) { return {tol, tol, tol}; }
};

struct PureState {
  ComplexVector amplitudes;

  Eigen::Index dim() const { return amplitudes.size(); }
};

/// Hermitian, positive semidefinite, unit-trace matrix.
///
/// Instances are only produced by validate_density() or by constructions that
/// are valid by design (outer products, spectral projections).
class DensityMatrix {
 public:
  const ComplexMatrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }

  /// Wraps a matrix that the caller guarantees is a density matrix. Only
  /// for constructions that are valid by design; everything else goes
  /// through validate_density().
  static DensityMatrix assume_valid(ComplexMatrix m) { return DensityMatrix(std::move(m)); }

 private:
  explicit DensityMatrix(ComplexMatrix m) : matrix_(std::move(m)) {}
  ComplexMatrix matrix_;
};

enum class MetricKind { trace_distance, frobenius_distance, fidelity };

struct MetricValue {
  MetricKind kind;
  double value;
};

const char* to_string(MetricKind kind);

// ---------------------------------------------------------------------------
// Linear-algebra helpers

/// Frobenius inner product <a, b> = trace(a^dagger b).
cplx inner(const ComplexMatrix& a, const ComplexMatrix& b);

/// (h + h^dagger) / 2
ComplexMatrix hermitian_part(const ComplexMatrix& h);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Ordered Kronecker product; the first factor is the slowest index.
ComplexMatrix kron_all(std::span<const ComplexMatrix> factors);

bool is_unitary(const ComplexMatrix& u, double tol = 1e-9);

/// Eigenvalues (ascending) of the Hermitian part of h.
RealVector hermitian_eigenvalues(const ComplexMatrix& h);

// ---------------------------------------------------------------------------
// State construction

DensityMatrix density_from_pure(const PureState& psi, double tol = 1e-9);

DensityMatrix density_from_mixture(std::span<const double> weights,
                                   std::span<const PureState> states,
                                   double tol = 1e-9);

/// Certifies rho as a density matrix. Throws ValidationError listing every
/// violated constraint, or DimensionError for non-square input.
DensityMatrix validate_density(const ComplexMatrix& rho, const Tolerance& tol = {});
DensityMatrix validate_density(const ComplexMatrix& rho, double tol);

DensityMatrix maximally_mixed(Eigen::Index dim);

// ---------------------------------------------------------------------------
// Metrics

/// (trace sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2, in [0, 1].
MetricValue fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2);

/// psi^dagger rho psi; equals fidelity() when the first argument is pure.
double pure_state_fidelity(const PureState& psi, const DensityMatrix& rho);

/// Sum of singular values of the difference (no factor 1/2).
MetricValue trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);
MetricValue trace_distance(const DensityMatrix& a, const DensityMatrix& b);

MetricValue frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);
MetricValue frobenius_distance(const DensityMatrix& a, const DensityMatrix& b);

// ---------------------------------------------------------------------------
// Random sampling

/// Matrix of i.i.d. standard complex Gaussians (E|z|^2 = 1).
ComplexMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// Haar-distributed unitary: complex Gaussian matrix, QR, and the phases of
/// diag(R) moved into Q.
ComplexMatrix haar_random_unitary(Eigen::Index dim, Rng& rng);
ComplexMatrix haar_random_unitary(Eigen::Index dim, std::uint64_t seed);

/// Haar-random unit vector in C^dim.
PureState haar_random_pure_state(Eigen::Index dim, Rng& rng);

}  // namespace qst
