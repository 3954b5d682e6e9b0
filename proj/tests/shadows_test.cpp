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

#include <gtest/gtest.h>

#include "qst/estimators.hpp"
#include "test_support.hpp"

namespace qst {
namespace {

using testing::diag;
using testing::max_abs;

TEST(Snapshot, IdentityUnitary) {
  const auto s = shadow_snapshot(ComplexMatrix::Identity(2, 2), 0);
  EXPECT_LT(max_abs(s.matrix - diag({2, -1})), 1e-15);
}

TEST(Snapshot, SpectrumAndTrace) {
  for (Eigen::Index d : {2, 4, 8}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto u = haar_random_unitary(d, seed);
      const auto s = shadow_snapshot(u, static_cast<std::size_t>(seed % d));
      const RealVector ev = hermitian_eigenvalues(s.matrix);
      EXPECT_NEAR(ev[d - 1], static_cast<double>(d), 1e-9);
      for (Eigen::Index k = 0; k + 1 < d; ++k) EXPECT_NEAR(ev[k], -1.0, 1e-9);
      EXPECT_NEAR(s.matrix.trace().real(), 1.0, 1e-12);
    }
  }
  EXPECT_THROW(shadow_snapshot(ComplexMatrix::Identity(2, 2), 2), InvalidArgument);
  EXPECT_THROW(shadow_snapshot(diag({1, 2}), 0), InvalidArgument);
}

TEST(Channel, InverseIdentity) {
  for (Eigen::Index d : {2, 4, 8}) {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto rho = testing::random_density(d, s);
      EXPECT_LT(max_abs(haar_channel_inverse(haar_channel(rho.matrix())) - rho.matrix()), 1e-12);
    }
  }
}

TEST(ShadowState, SingleSnapshotAndErrors) {
  const std::vector<ShadowSnapshot> one{shadow_snapshot(ComplexMatrix::Identity(2, 2), 1)};
  EXPECT_EQ(shadow_state(one), one[0].matrix);
  EXPECT_THROW(shadow_state(std::span<const ShadowSnapshot>()), InvalidArgument);
}

TEST(ShadowState, UnbiasedForBasisState) {
  const auto rho = testing::basis_state(2, 0);
  const auto snaps = sample_haar_snapshots(rho, 100000, 17);
  EXPECT_LT((shadow_state(snaps) - rho.matrix()).norm(), 0.05);
}

TEST(ShadowState, MaximallyMixedTrace) {
  const auto snaps = sample_haar_snapshots(maximally_mixed(2), 1000, 3);
  EXPECT_NEAR(shadow_state(snaps).trace().real(), 1.0, 1e-12);
}

TEST(ShadowState, EntrywiseWithinFourStandardErrors) {
  const auto rho = testing::random_pure(2, 44);
  const std::size_t count = 100000;
  const auto snaps = sample_haar_snapshots(rho, count, 45);
  const ComplexMatrix mean = shadow_state(snaps);
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index j = 0; j < 2; ++j) {
      double vr = 0.0, vi = 0.0;
      for (const auto& s : snaps) {
        vr += std::pow(s.matrix(i, j).real() - mean(i, j).real(), 2);
        vi += std::pow(s.matrix(i, j).imag() - mean(i, j).imag(), 2);
      }
      const double ser = std::sqrt(vr / (count - 1) / count);
      const double sei = std::sqrt(vi / (count - 1) / count);
      EXPECT_LE(std::abs(mean(i, j).real() - rho.matrix()(i, j).real()), 4 * ser + 1e-15);
      EXPECT_LE(std::abs(mean(i, j).imag() - rho.matrix()(i, j).imag()), 4 * sei + 1e-15);
    }
  }
}

TEST(ProjectedShadow, Examples) {
  const std::vector<ShadowSnapshot> one{{diag({2, -1})}};
  EXPECT_LT(max_abs(projected_shadow(one, StructureModel::full()).state.matrix() - diag({1, 0})), 1e-14);

  const auto rho = testing::random_pure(2, 9);
  const auto snaps = sample_haar_snapshots(rho, 10000, 10);
  EXPECT_GT(fidelity(projected_shadow(snaps, StructureModel::low_rank(1)).state, rho).value, 0.95);

  const auto exact = testing::random_density(2, 12);
  const std::vector<ShadowSnapshot> same{{exact.matrix()}};
  EXPECT_LT(max_abs(projected_shadow(same, StructureModel::full()).state.matrix() - exact.matrix()), 1e-12);
}

TEST(MedianOfMeans, Examples) {
  const auto rho = testing::basis_state(2, 0);
  const auto snaps = sample_haar_snapshots(rho, 10000, 21);
  const std::vector<ComplexMatrix> obs{ComplexMatrix::Identity(2, 2), diag({1, -1})};
  const auto est = predict_observables_mom(snaps, obs, 10);
  EXPECT_NEAR(est[0], 1.0, 1e-12);
  EXPECT_NEAR(est[1], 1.0, 0.1);
  const auto plain = predict_observables_mom(snaps, obs, 1);
  EXPECT_NEAR(plain[1], inner(obs[1], shadow_state(snaps)).real(), 1e-12);
}

TEST(MedianOfMeans, Errors) {
  const auto snaps = sample_haar_snapshots(maximally_mixed(2), 5, 1);
  const std::vector<ComplexMatrix> obs{ComplexMatrix::Identity(2, 2)};
  EXPECT_THROW(predict_observables_mom(snaps, std::span<const ComplexMatrix>(), 1), InvalidArgument);
  EXPECT_THROW(predict_observables_mom(snaps, obs, 6), InvalidArgument);
  EXPECT_THROW(predict_observables_mom(snaps, obs, 0), InvalidArgument);
}

TEST(ShadowFromFrequencies, MatchesSingleShotSnapshot) {
  const ComplexMatrix u = haar_random_unitary(2, std::uint64_t{3});
  const Povm setting = projective_povm_from_unitary(u);
  const auto s = shadow_from_frequencies(setting, make_distribution({0.0, 1.0}));
  EXPECT_LT(max_abs(s.matrix - shadow_snapshot(u, 1).matrix), 1e-12);
}

}  // namespace
}  // namespace qst
