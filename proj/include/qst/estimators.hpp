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

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qst/povm.hpp"
#include "qst/qcore.hpp"
#include "qst/sampler.hpp"
#include "qst/structures.hpp"

namespace qst {

/// The stacked linear map rho -> (Re <A_{q,k}, rho>)_{q,k} of an ensemble and
/// its adjoint y -> sum y_{q,k} A_{q,k}.
class MeasurementMap {
 public:
  explicit MeasurementMap(const PovmEnsemble& ensemble);

  Eigen::Index dim() const { return dim_; }
  std::size_t outputs() const { return effects_.size(); }

  RealVector forward(const ComplexMatrix& rho) const;
  ComplexMatrix adjoint(const RealVector& y) const;

  /// Largest eigenvalue of A^dagger A (power iteration).
  double lipschitz() const;

  /// Matrix of the map in the orthonormal Hermitian basis of hermitian_basis().
  Eigen::MatrixXd real_matrix() const;

 private:
  Eigen::Index dim_ = 0;
  std::vector<ComplexMatrix> effects_;
};

/// Orthonormal basis of d x d Hermitian matrices: E_ii, then for i < j
/// (E_ij + E_ji)/sqrt2 and i(E_ij - E_ji)/sqrt2.
std::vector<ComplexMatrix> hermitian_basis(Eigen::Index dim);

/// Concatenates per-setting distributions; lengths must match the ensemble.
RealVector stack_frequencies(const PovmEnsemble& ensemble, std::span<const OutcomeDistribution> freqs);

/// ||A(rho) - p||_2^2
double least_squares_loss(const MeasurementMap& map, const ComplexMatrix& rho, const RealVector& p);

// ---------------------------------------------------------------------------

enum class Method { pls, iht, factored_pgd, projected_shadow };

const char* to_string(Method m);
Method parse_method(const std::string& name);

struct EstimatorConfig {
  Method method = Method::pls;
  StructureModel structure = StructureModel::full();
  /// Step size; unset selects 1/L (iht) or 1/(4L) (factored_pgd), L = lipschitz().
  std::optional<double> step_size;
  std::size_t max_iters = 2000;
  double stop_tol = 1e-9;
  std::size_t mom_batches = 1;

  void validate() const;
};

struct EstimateResult {
  std::string method;
  DensityMatrix state;
  std::size_t iterations = 0;
  std::vector<double> residuals;
  std::chrono::duration<double> wall{};
};

/// Hermitian minimiser of ||A(rho) - p||_2^2; the minimum-Frobenius-norm one
/// when A^dagger A is singular. Not necessarily PSD.
ComplexMatrix least_squares(const PovmEnsemble& ensemble, std::span<const OutcomeDistribution> freqs);

/// project_density(least_squares(...)).
EstimateResult projected_least_squares(const PovmEnsemble& ensemble,
                                       std::span<const OutcomeDistribution> freqs);

/// Projected gradient descent rho <- P(rho - mu A^dagger(A(rho) - p)) onto
/// the structure class. Starts from `init` (projected onto the class) or,
/// when absent, from the projected least-squares estimate. Throws
/// DivergenceError if the loss exceeds 10x its initial value.
EstimateResult iht(const PovmEnsemble& ensemble, std::span<const OutcomeDistribution> freqs,
                   const StructureModel& structure, const EstimatorConfig& cfg,
                   const std::optional<ComplexMatrix>& init = std::nullopt);

/// Wirtinger gradient dL/dU* = 2 A^dagger(A(UU^dagger) - p) U of the loss
/// L(U) = ||A(UU^dagger) - p||_2^2. The real gradient with respect to
/// (Re U, Im U), packed as a complex matrix, is twice this.
ComplexMatrix factored_gradient(const MeasurementMap& map, const RealVector& p, const ComplexMatrix& u);

/// Gradient steps on U followed by U <- U / ||U||_F; returns UU^dagger.
/// Starts from `init` (normalised) or from the top-r eigenpairs of the
/// projected least-squares estimate.
EstimateResult factored_pgd(const PovmEnsemble& ensemble, std::span<const OutcomeDistribution> freqs,
                            std::size_t rank, const EstimatorConfig& cfg,
                            const std::optional<ComplexMatrix>& init = std::nullopt);

// ---------------------------------------------------------------------------
// Classical shadows (global Haar ensemble)

/// Inverted-channel single-shot estimate: unit trace, Hermitian, not PSD.
struct ShadowSnapshot {
  ComplexMatrix matrix;

  Eigen::Index dim() const { return matrix.rows(); }
};

/// M(rho) = (rho + trace(rho) I) / (d + 1)
ComplexMatrix haar_channel(const ComplexMatrix& rho);

/// M^{-1}(X) = (d + 1) X - trace(X) I
ComplexMatrix haar_channel_inverse(const ComplexMatrix& x);

/// (d + 1) u_k u_k^dagger - I for column k of u.
ShadowSnapshot shadow_snapshot(const ComplexMatrix& u, std::size_t outcome);

/// M^{-1}(sum_k phat_k A_k) for one projective setting and its frequencies.
ShadowSnapshot shadow_from_frequencies(const Povm& setting, const OutcomeDistribution& freqs);

/// `count` single-shot snapshots, each from a fresh Haar unitary.
std::vector<ShadowSnapshot> sample_haar_snapshots(const DensityMatrix& rho, std::size_t count,
                                                  std::uint64_t seed);

/// Arithmetic mean of the snapshots.
ComplexMatrix shadow_state(std::span<const ShadowSnapshot> snapshots);

EstimateResult projected_shadow(std::span<const ShadowSnapshot> snapshots, const StructureModel& structure);

/// Median-of-means estimate of trace(B rho) per observable. Snapshots are
/// split into `batches` contiguous groups whose sizes differ by at most one.
std::vector<double> predict_observables_mom(std::span<const ShadowSnapshot> snapshots,
                                            std::span<const ComplexMatrix> observables,
                                            std::size_t batches);

// ---------------------------------------------------------------------------

/// Runs the configured estimator on measurement records of `ensemble`.
EstimateResult run_estimator(const EstimatorConfig& cfg, const PovmEnsemble& ensemble,
                             std::span<const MeasurementRecord> records);

/// Same, from frequency vectors (population or empirical).
EstimateResult run_estimator(const EstimatorConfig& cfg, const PovmEnsemble& ensemble,
                             std::span<const OutcomeDistribution> freqs);

}  // namespace qst
