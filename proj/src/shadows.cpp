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

#include <algorithm>
#include <random>

#include "qst/estimators.hpp"

namespace qst {

ComplexMatrix haar_channel(const ComplexMatrix& rho) {
  const auto d = static_cast<double>(rho.rows());
  return (rho + rho.trace() * ComplexMatrix::Identity(rho.rows(), rho.cols())) / (d + 1.0);
}

ComplexMatrix haar_channel_inverse(const ComplexMatrix& x) {
  const auto d = static_cast<double>(x.rows());
  return (d + 1.0) * x - x.trace() * ComplexMatrix::Identity(x.rows(), x.cols());
}

ShadowSnapshot shadow_snapshot(const ComplexMatrix& u, std::size_t outcome) {
  if (!is_unitary(u)) throw InvalidArgument("shadow_snapshot: matrix is not unitary");
  if (outcome >= static_cast<std::size_t>(u.cols())) throw InvalidArgument("shadow_snapshot: outcome out of range");
  const Eigen::Index d = u.rows();
  const ComplexVector v = u.col(static_cast<Eigen::Index>(outcome));
  ComplexMatrix m = static_cast<double>(d + 1) * (v * v.adjoint()) - ComplexMatrix::Identity(d, d);
  return {hermitian_part(m)};
}

ShadowSnapshot shadow_from_frequencies(const Povm& setting, const OutcomeDistribution& freqs) {
  if (freqs.size() != setting.outcomes()) throw DimensionError("shadow: frequency length does not match the setting");
  ComplexMatrix avg = ComplexMatrix::Zero(setting.dim(), setting.dim());
  for (std::size_t k = 0; k < freqs.size(); ++k) avg += freqs.probs[k] * setting.effect(k);
  return {hermitian_part(haar_channel_inverse(avg))};
}

std::vector<ShadowSnapshot> sample_haar_snapshots(const DensityMatrix& rho, std::size_t count,
                                                  std::uint64_t seed) {
  const Eigen::Index d = rho.dim();
  std::vector<ShadowSnapshot> out;
  out.reserve(count);
  std::vector<double> probs(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, i));
    const ComplexMatrix u = haar_random_unitary(d, rng);
    for (Eigen::Index k = 0; k < d; ++k) {
      probs[static_cast<std::size_t>(k)] = std::max(0.0, (u.col(k).adjoint() * rho.matrix() * u.col(k))(0, 0).real());
    }
    std::discrete_distribution<std::size_t> pick(probs.begin(), probs.end());
    out.push_back(shadow_snapshot(u, pick(rng)));
  }
  return out;
}

ComplexMatrix shadow_state(std::span<const ShadowSnapshot> snapshots) {
  if (snapshots.empty()) throw InvalidArgument("shadow_state: no snapshots");
  const Eigen::Index d = snapshots.front().dim();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& s : snapshots) {
    if (s.dim() != d) throw DimensionError("shadow_state: snapshots have different dimensions");
    sum += s.matrix;
  }
  return sum / static_cast<double>(snapshots.size());
}

EstimateResult projected_shadow(std::span<const ShadowSnapshot> snapshots, const StructureModel& structure) {
  const auto start = std::chrono::steady_clock::now();
  const ComplexMatrix mean = hermitian_part(shadow_state(snapshots));
  structure.validate(mean.rows());
  DensityMatrix rho = project_structure(mean, structure);
  const double r = (rho.matrix() - mean).squaredNorm();
  return {to_string(Method::projected_shadow), std::move(rho), 1, {r},
          std::chrono::steady_clock::now() - start};
}

std::vector<double> predict_observables_mom(std::span<const ShadowSnapshot> snapshots,
                                            std::span<const ComplexMatrix> observables,
                                            std::size_t batches) {
  if (observables.empty()) throw InvalidArgument("predict_observables_mom: no observables");
  if (snapshots.empty()) throw InvalidArgument("predict_observables_mom: no snapshots");
  if (batches < 1 || batches > snapshots.size()) {
    throw InvalidArgument("predict_observables_mom: batches must be in [1, snapshot count]");
  }
  const Eigen::Index d = snapshots.front().dim();
  for (const auto& b : observables) {
    if (b.rows() != d || b.cols() != d) throw DimensionError("predict_observables_mom: observable dimension mismatch");
  }

  std::vector<ComplexMatrix> means;
  means.reserve(batches);
  const std::size_t base = snapshots.size() / batches;
  const std::size_t extra = snapshots.size() % batches;
  std::size_t offset = 0;
  for (std::size_t g = 0; g < batches; ++g) {
    const std::size_t len = base + (g < extra ? 1 : 0);
    means.push_back(shadow_state(snapshots.subspan(offset, len)));
    offset += len;
  }

  std::vector<double> out;
  out.reserve(observables.size());
  std::vector<double> values(batches);
  for (const auto& b : observables) {
    for (std::size_t g = 0; g < batches; ++g) values[g] = inner(b, means[g]).real();
    std::sort(values.begin(), values.end());
    const std::size_t mid = batches / 2;
    out.push_back(batches % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]));
  }
  return out;
}

}  // namespace qst
