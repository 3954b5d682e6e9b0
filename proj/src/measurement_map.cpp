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

#include <cmath>
#include <sstream>

#include "qst/estimators.hpp"

namespace qst {

MeasurementMap::MeasurementMap(const PovmEnsemble& ensemble) : dim_(ensemble.dim()) {
  if (ensemble.size() == 0) throw InvalidArgument("measurement map: empty ensemble");
  effects_.reserve(ensemble.total_outcomes());
  for (const auto& setting : ensemble.settings) {
    for (const auto& a : setting.effects()) effects_.push_back(a);
  }
}

RealVector MeasurementMap::forward(const ComplexMatrix& rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) throw DimensionError("measurement map: input dimension mismatch");
  RealVector out(static_cast<Eigen::Index>(effects_.size()));
  for (std::size_t k = 0; k < effects_.size(); ++k) {
    out[static_cast<Eigen::Index>(k)] = inner(effects_[k], rho).real();
  }
  return out;
}

ComplexMatrix MeasurementMap::adjoint(const RealVector& y) const {
  if (static_cast<std::size_t>(y.size()) != effects_.size()) {
    throw DimensionError("measurement map: adjoint input has the wrong length");
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_, dim_);
  for (std::size_t k = 0; k < effects_.size(); ++k) out += y[static_cast<Eigen::Index>(k)] * effects_[k];
  return out;
}

double MeasurementMap::lipschitz() const {
  // Deterministic start with weight on every basis direction.
  ComplexMatrix x = ComplexMatrix::Identity(dim_, dim_);
  for (Eigen::Index i = 0; i < dim_; ++i) {
    for (Eigen::Index j = i + 1; j < dim_; ++j) {
      const cplx v(0.1 / static_cast<double>(i + j + 1), 0.05 / static_cast<double>(j + 1));
      x(i, j) = v;
      x(j, i) = std::conj(v);
    }
  }
  x /= x.norm();
  double estimate = 0.0;
  for (int iter = 0; iter < 500; ++iter) {
    ComplexMatrix y = adjoint(forward(x));
    const double norm = y.norm();
    if (norm == 0.0) return 0.0;
    const double next = inner(x, y).real();
    x = y / norm;
    if (iter > 0 && std::abs(next - estimate) <= 1e-12 * std::abs(next)) {
      estimate = next;
      break;
    }
    estimate = next;
  }
  return estimate;
}

std::vector<ComplexMatrix> hermitian_basis(Eigen::Index dim) {
  std::vector<ComplexMatrix> basis;
  basis.reserve(static_cast<std::size_t>(dim * dim));
  const double r = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < dim; ++i) {
    ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
    e(i, i) = 1.0;
    basis.push_back(std::move(e));
  }
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      ComplexMatrix sym = ComplexMatrix::Zero(dim, dim);
      sym(i, j) = r;
      sym(j, i) = r;
      basis.push_back(std::move(sym));
      ComplexMatrix anti = ComplexMatrix::Zero(dim, dim);
      anti(i, j) = cplx(0.0, r);
      anti(j, i) = cplx(0.0, -r);
      basis.push_back(std::move(anti));
    }
  }
  return basis;
}

Eigen::MatrixXd MeasurementMap::real_matrix() const {
  const auto basis = hermitian_basis(dim_);
  Eigen::MatrixXd a(static_cast<Eigen::Index>(effects_.size()), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < effects_.size(); ++k) {
    for (std::size_t b = 0; b < basis.size(); ++b) {
      a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(b)) = inner(effects_[k], basis[b]).real();
    }
  }
  return a;
}

RealVector stack_frequencies(const PovmEnsemble& ensemble, std::span<const OutcomeDistribution> freqs) {
  if (freqs.size() != ensemble.size()) {
    std::ostringstream os;
    os << "frequencies: " << freqs.size() << " distributions for " << ensemble.size() << " settings";
    throw DimensionError(os.str());
  }
  RealVector out(static_cast<Eigen::Index>(ensemble.total_outcomes()));
  Eigen::Index offset = 0;
  for (std::size_t q = 0; q < freqs.size(); ++q) {
    if (freqs[q].size() != ensemble.settings[q].outcomes()) {
      std::ostringstream os;
      os << "frequencies: setting " << q << " has " << ensemble.settings[q].outcomes()
         << " outcomes but " << freqs[q].size() << " frequencies";
      throw DimensionError(os.str());
    }
    for (double p : freqs[q].probs) out[offset++] = p;
  }
  return out;
}

double least_squares_loss(const MeasurementMap& map, const ComplexMatrix& rho, const RealVector& p) {
  return (map.forward(rho) - p).squaredNorm();
}

}  // namespace qst
