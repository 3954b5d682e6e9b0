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

#include <cstdint>

#include "qst/qcore.hpp"
#include "qst/structures.hpp"

namespace qst::testing {

inline DensityMatrix random_density(Eigen::Index dim, std::uint64_t seed) {
  return random_structured_state(StructureModel::full(), dim, seed);
}

inline DensityMatrix random_pure(Eigen::Index dim, std::uint64_t seed) {
  return random_structured_state(StructureModel::low_rank(1), dim, seed);
}

inline DensityMatrix basis_state(Eigen::Index dim, Eigen::Index k) {
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(k, k) = 1.0;
  return validate_density(m);
}

inline ComplexMatrix diag(std::initializer_list<double> values) {
  const auto n = static_cast<Eigen::Index>(values.size());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  Eigen::Index i = 0;
  for (double v : values) {
    m(i, i) = v;
    ++i;
  }
  return m;
}

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace qst::testing
