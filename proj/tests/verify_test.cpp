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
#include <cmath>

#include <gtest/gtest.h>

#include "qst/verify.hpp"
#include "test_support.hpp"

namespace qst {
namespace {

using testing::diag;
using testing::random_density;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v.size() % 2 ? v[v.size() / 2] : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
}

ComplexMatrix random_traceless(Eigen::Index d, std::uint64_t seed) {
  Rng rng(seed);
  ComplexMatrix h = hermitian_part(complex_gaussian(d, d, rng));
  h -= (h.trace() / static_cast<double>(d)) * ComplexMatrix::Identity(d, d);
  return h;
}

TEST(DesignIsometry, HandCase) {
  const auto r = check_design_isometry(design3_povm_qubit(), testing::basis_state(2, 0), testing::basis_state(2, 1));
  EXPECT_NEAR(r.lhs, 2.0 / 9, 1e-15);
  EXPECT_NEAR(r.rhs, 2.0 / 9, 1e-15);
  EXPECT_LT(r.abs_deviation, 1e-12);
}

TEST(DesignIsometry, EqualStates) {
  const auto rho = random_density(2, 1);
  const auto r = check_design_isometry(design3_povm_qubit(), rho, rho);
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_EQ(r.rhs, 0.0);
}

TEST(DesignIsometry, RandomPairs) {
  const Povm povm = design3_povm_qubit();
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const auto r = check_design_isometry(povm, random_density(2, 2 * s), random_density(2, 2 * s + 1));
    EXPECT_LT(r.abs_deviation, 1e-10);
  }
  EXPECT_THROW(check_design_isometry(povm, maximally_mixed(4), maximally_mixed(4)), DimensionError);
}

TEST(HaarExpectation, SingleQubit) {
  const auto r = check_haar_expectation(1, 100000, diag({1, -1}), 3);
  EXPECT_NEAR(r.predicted, 2.0 / 3, 1e-15);
  EXPECT_NEAR(r.mc_estimate, 2.0 / 3, 0.02 * 2.0 / 3);
}

TEST(HaarExpectation, ZeroDelta) {
  const auto r = check_haar_expectation(2, 10, ComplexMatrix::Zero(4, 4), 3);
  EXPECT_EQ(r.mc_estimate, 0.0);
  EXPECT_EQ(r.predicted, 0.0);
}

TEST(HaarExpectation, TwoQubits) {
  const ComplexMatrix delta = random_traceless(4, 8);
  const auto r = check_haar_expectation(2, 100000, delta, 9);
  EXPECT_LT(std::abs(r.mc_estimate - r.predicted) / r.predicted, 0.03);
}

TEST(HaarExpectation, RejectsTrace) {
  EXPECT_THROW(check_haar_expectation(1, 10, diag({1, 0}), 1), InvalidArgument);
}

TEST(PauliRip, FullSetIsExact) {
  const auto r = check_pauli_rip(2, 1, 16, 50, 4, PauliSelection::full);
  for (double x : r.ratios) EXPECT_NEAR(x, 1.0, 1e-12);
  EXPECT_LT(r.empirical_delta, 1e-12);
}

TEST(PauliRip, ParsevalForAnyHermitianInput) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto all = all_pauli_indices(n);
    const Eigen::Index d = Eigen::Index{1} << n;
    for (std::uint64_t s = 0; s < 5; ++s) {
      Rng rng(s);
      const ComplexMatrix x = hermitian_part(complex_gaussian(d, d, rng));
      EXPECT_NEAR(pauli_rip_ratio(all, x), 1.0, 1e-10);
    }
  }
}

TEST(PauliRip, Errors) {
  EXPECT_THROW(check_pauli_rip(2, 1, 17, 10, 1), InvalidArgument);
  EXPECT_THROW(check_pauli_rip(2, 5, 8, 10, 1), InvalidArgument);
  EXPECT_THROW(check_pauli_rip(2, 1, 8, 10, 1, PauliSelection::full), InvalidArgument);
  const auto all = all_pauli_indices(1);
  EXPECT_THROW(pauli_rip_ratio(all, ComplexMatrix::Zero(2, 2)), InvalidArgument);
}

TEST(PauliRip, FourQubitConcentration) {
  int good = 0;
  const int runs = 20;
  for (int run = 0; run < runs; ++run) {
    if (check_pauli_rip(4, 1, 256, 100, derive_seed(50, static_cast<std::uint64_t>(run))).empirical_delta < 0.5) ++good;
  }
  EXPECT_GE(good, 19);
}

TEST(PauliRip, DeltaShrinksWithSettings) {
  std::vector<double> medians;
  const std::vector<std::size_t> qs{8, 16, 32, 64};
  for (std::size_t q : qs) {
    std::vector<double> deltas;
    for (std::uint64_t rep = 0; rep < 20; ++rep) {
      deltas.push_back(check_pauli_rip(3, 1, q, 20, derive_seed(q, rep)).empirical_delta);
    }
    medians.push_back(median(deltas));
  }
  for (std::size_t i = 1; i < medians.size(); ++i) EXPECT_LE(medians[i], medians[i - 1]);
}

TEST(Kl, IdenticalStates) {
  const auto rho = random_density(2, 3);
  const auto r = kl_check(rho, rho, design3_povm_qubit(), 1000);
  EXPECT_EQ(r.kl, 0.0);
  EXPECT_EQ(r.l2_approx, 0.0);
}

TEST(Kl, DirectFormula) {
  const auto r = kl_check(testing::basis_state(2, 0), maximally_mixed(2), computational_basis_povm(2), 1);
  EXPECT_NEAR(r.kl, std::log(2.0), 1e-15);
  EXPECT_NEAR(r.l2_approx, 0.25, 1e-15);
}

TEST(Kl, SupportViolationIsInfinite) {
  const auto r = kl_check(maximally_mixed(2), testing::basis_state(2, 0), computational_basis_povm(2), 1);
  EXPECT_FALSE(r.finite);
  EXPECT_TRUE(std::isinf(r.kl));
}

// Moves rho1 toward I/2 so that ||rho1 - rho2||_F = dist.
DensityMatrix nearby(const DensityMatrix& rho1, double dist) {
  const ComplexMatrix dir = maximally_mixed(2).matrix() - rho1.matrix();
  return validate_density(rho1.matrix() + (dist / dir.norm()) * dir);
}

TEST(Kl, QuadraticApproximationNearby) {
  const Povm povm = design3_povm_qubit();
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto rho1 = random_density(2, 100 + s);
    const auto r = kl_check(rho1, nearby(rho1, 0.01), povm, 1000);
    EXPECT_LT(r.fisher_gap / r.kl, 0.1);
  }
}

TEST(Kl, IdentityCovarianceFormUnderestimates) {
  // Every design3 probability is at most 1/3, so sum d^2/p >= 3 sum d^2 and
  // the unweighted form undershoots the divergence by at least 2/3 near zero.
  const Povm povm = design3_povm_qubit();
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto rho1 = random_density(2, 200 + s);
    const auto r = kl_check(rho1, nearby(rho1, 0.01), povm, 1000);
    EXPECT_LT(r.l2_approx, r.kl);
    EXPECT_GT(r.gap / r.kl, 0.6);
  }
}

TEST(Kl, ApproximationImprovesAsStatesApproach) {
  const Povm povm = design3_povm_qubit();
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto rho1 = random_density(2, 300 + s);
    const auto far = kl_check(rho1, nearby(rho1, std::min(0.1, 0.9 * (maximally_mixed(2).matrix() - rho1.matrix()).norm())), povm, 1);
    const auto close = kl_check(rho1, nearby(rho1, 0.001), povm, 1);
    EXPECT_LT(close.fisher_gap / close.kl, far.fisher_gap / far.kl);
  }
}

TEST(Kl, NonNegativeAndZeroOnlyAtEquality) {
  const Povm povm = sic_povm_qubit();
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto a = random_density(2, 2 * s);
    const auto b = random_density(2, 2 * s + 1);
    const auto r = kl_check(a, b, povm, 1);
    EXPECT_GE(r.kl, 0.0);
    EXPECT_GT(r.kl, 0.0);
  }
}

TEST(ScalingSweep, SlopeNearMinusOneHalf) {
  EstimatorConfig cfg;
  EnsembleSpec ens;
  ens.scheme = "design3";
  const auto truth = testing::random_pure(2, 7);
  const std::vector<std::uint64_t> grid{100, 1000, 10000};
  const auto r = error_scaling_sweep(cfg, ens, truth, grid, 50, 11);
  ASSERT_TRUE(r.slope.has_value());
  EXPECT_GE(*r.slope, -0.65);
  EXPECT_LE(*r.slope, -0.35);
  EXPECT_EQ(r.failures, 0u);
  EXPECT_EQ(r.trials.size(), 150u);
}

TEST(ScalingSweep, DegenerateGrid) {
  const std::vector<std::uint64_t> one{100};
  EXPECT_THROW(error_scaling_sweep(EstimatorConfig{}, EnsembleSpec{}, maximally_mixed(2), one, 5, 1),
               InvalidArgument);
  const std::vector<std::uint64_t> unordered{100, 10, 1000};
  EXPECT_THROW(error_scaling_sweep(EstimatorConfig{}, EnsembleSpec{}, maximally_mixed(2), unordered, 5, 1),
               InvalidArgument);
}

TEST(ScalingSweep, NoiselessHitsTheFloor) {
  const std::vector<std::uint64_t> grid{100, 1000, 10000};
  const auto r = error_scaling_sweep(EstimatorConfig{}, EnsembleSpec{}, testing::random_pure(2, 1), grid, 3, 1, true);
  EXPECT_TRUE(r.at_floor);
  EXPECT_FALSE(r.slope.has_value());
}

TEST(FitSlope, ExactLine) {
  const std::vector<double> x{0, 1, 2, 3};
  const std::vector<double> y{1, -1, -3, -5};
  EXPECT_NEAR(fit_slope(x, y), -2.0, 1e-15);
}

TEST(SampleBudget, LowRankFormula) {
  const auto r = sample_budget(StructureModel::low_rank(2), 4, 2, 0.1, 1.0);
  EXPECT_NEAR(r.log_covering, 32.0, 1e-12);
  EXPECT_NEAR(r.recommended_shots, 3200.0, 1e-9);
  EXPECT_TRUE(r.advisory);
  EXPECT_EQ(r.tag, "low_rank");
}

TEST(SampleBudget, InverseSquareLaw) {
  for (const auto& m : {StructureModel::full(), StructureModel::low_rank(3), StructureModel::mpo({2, 2, 2})}) {
    const auto a = sample_budget(m, 4, 2, 0.2, 1.5);
    const auto b = sample_budget(m, 4, 2, 0.1, 1.5);
    EXPECT_DOUBLE_EQ(b.recommended_shots, 4 * a.recommended_shots);
  }
}

TEST(SampleBudget, ClassValuesAtEightQubits) {
  const auto full = sample_budget(StructureModel::full(), 8, 2, 0.1, 1.0);
  const auto low = sample_budget(StructureModel::low_rank(1), 8, 2, 0.1, 1.0);
  const auto mpo = sample_budget(StructureModel::mpo(std::vector<std::size_t>(7, 2)), 8, 2, 0.1, 1.0);
  EXPECT_DOUBLE_EQ(full.log_covering, 65536.0);
  EXPECT_DOUBLE_EQ(low.log_covering, 256.0);
  EXPECT_NEAR(mpo.log_covering, 8 * 4 * 4 * std::log(8.0), 1e-9);
  EXPECT_GT(full.recommended_shots, low.recommended_shots);
  EXPECT_GT(full.recommended_shots, mpo.recommended_shots);
}

TEST(SampleBudget, Errors) {
  EXPECT_THROW(sample_budget(StructureModel::full(), 2, 2, 0.0, 1.0), InvalidArgument);
  EXPECT_THROW(sample_budget(StructureModel::full(), 2, 2, 1.0, 1.0), InvalidArgument);
  EXPECT_THROW(sample_budget(StructureModel::mpo({2}), 1, 2, 0.1, 1.0), InvalidArgument);
}

TEST(DesignGamma, Branches) {
  const Povm p = design3_povm_qubit();
  EXPECT_NEAR(design_gamma(p, maximally_mixed(2), 2), 1.0, 1e-14);
  EXPECT_NEAR(design_gamma(p, testing::basis_state(2, 0), 2), 2.0, 1e-14);
  EXPECT_EQ(design_gamma(p, testing::basis_state(2, 0), 3), 1.0);
  EXPECT_THROW(design_gamma(p, maximally_mixed(2), 1), InvalidArgument);
}

}  // namespace
}  // namespace qst
