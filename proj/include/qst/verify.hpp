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
#include <optional>
#include <string>
#include <vector>

#include "qst/estimators.hpp"
#include "qst/povm.hpp"
#include "qst/qcore.hpp"
#include "qst/structures.hpp"

namespace qst {

/// Both sides of sum_k <A_k, D>^2 = d ||D||_F^2 / (K (d + 1)), D = rho1 - rho2.
struct IsometryReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_deviation = 0.0;
};

IsometryReport check_design_isometry(const Povm& povm, const DensityMatrix& rho1, const DensityMatrix& rho2);

struct HaarExpectation {
  double mc_estimate = 0.0;  // mean over settings of sum_k <u_k u_k^dagger, delta>^2
  double predicted = 0.0;    // ||delta||_F^2 / (2^n + 1)
};

/// Throws InvalidArgument if delta is not Hermitian and traceless (1e-9).
HaarExpectation check_haar_expectation(std::size_t qubits, std::size_t settings, const ComplexMatrix& delta,
                                       std::uint64_t seed);

enum class PauliSelection {
  iid,   // Q indices drawn uniformly with replacement
  full,  // every one of the 4^n indices once (Q must equal 4^n)
};

struct RipReport {
  std::vector<double> ratios;  // (2^n / Q) ||A(x)||^2 / ||x||_F^2 per trial
  double empirical_delta = 0.0;
};

/// Ratios on `trials` random rank-r Hermitian matrices of unit Frobenius norm.
RipReport check_pauli_rip(std::size_t qubits, std::size_t rank, std::size_t settings, std::size_t trials,
                          std::uint64_t seed, PauliSelection selection = PauliSelection::iid);

/// Same ratio for a caller-supplied Hermitian input and index set.
double pauli_rip_ratio(std::span<const PauliIndex> indices, const ComplexMatrix& x);

struct KlReport {
  double kl = 0.0;         // M sum p1 log(p1 / p2); +inf on a support violation
  double l2_approx = 0.0;  // (M/2) ||p1 - p2||^2
  double gap = 0.0;        // |kl - l2_approx|
  double fisher_approx = 0.0;  // (M/2) sum (p1 - p2)^2 / p1 over supp(p1)
  double fisher_gap = 0.0;     // |kl - fisher_approx|
  bool finite = true;
};

KlReport kl_check(const DensityMatrix& rho1, const DensityMatrix& rho2, const Povm& povm, double shots);

struct ScalingTrial {
  std::uint64_t shots = 0;
  std::size_t trial = 0;
  double frob_error = 0.0;
  double trace_error = 0.0;
  double fidelity = 0.0;
  double wall_ms = 0.0;
  bool failed = false;
};

struct ScalingReport {
  std::vector<std::uint64_t> grid;
  std::vector<double> median_errors;
  std::optional<double> slope;  // unset when the errors sit at the numerical floor
  bool at_floor = false;
  std::size_t failures = 0;
  std::vector<ScalingTrial> trials;
};

/// Median Frobenius error per grid point and the least-squares slope of
/// log(median) against log(M). `noiseless` uses population frequencies.
ScalingReport error_scaling_sweep(const EstimatorConfig& cfg, const EnsembleSpec& ensemble,
                                  const DensityMatrix& truth, std::span<const std::uint64_t> shots_grid,
                                  std::size_t trials, std::uint64_t seed, bool noiseless = false);

/// Least-squares slope of y against x.
double fit_slope(std::span<const double> x, std::span<const double> y);

/// Order-of-magnitude sample planner with every constant set to one.
struct BudgetReport {
  std::string tag;
  double log_covering = 0.0;
  double gamma = 0.0;
  double recommended_shots = 0.0;
  bool advisory = true;
};

BudgetReport sample_budget(const StructureModel& model, std::size_t sites, std::size_t local_dim,
                           double epsilon, double gamma);

/// K max_k p_k for design order t = 2; 1 for t >= 3.
double design_gamma(const Povm& povm, const DensityMatrix& rho, int design_order);

}  // namespace qst
