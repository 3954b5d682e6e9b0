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

#include "qst/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "qst/sampler.hpp"

namespace qst {

IsometryReport check_design_isometry(const Povm& povm, const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != povm.dim() || rho2.dim() != povm.dim()) {
    throw DimensionError("check_design_isometry: state and POVM dimensions differ");
  }
  const ComplexMatrix delta = rho1.matrix() - rho2.matrix();
  double lhs = 0.0;
  for (const auto& a : povm.effects()) {
    const double v = inner(a, delta).real();
    lhs += v * v;
  }
  const auto d = static_cast<double>(povm.dim());
  const auto k = static_cast<double>(povm.outcomes());
  const double rhs = d * delta.squaredNorm() / (k * (d + 1.0));
  return {lhs, rhs, std::abs(lhs - rhs)};
}

HaarExpectation check_haar_expectation(std::size_t qubits, std::size_t settings, const ComplexMatrix& delta,
                                       std::uint64_t seed) {
  if (qubits < 1 || qubits > 16) throw InvalidArgument("check_haar_expectation: qubits must be in [1, 16]");
  if (settings < 1) throw InvalidArgument("check_haar_expectation: need at least one setting");
  const Eigen::Index d = Eigen::Index{1} << qubits;
  if (delta.rows() != d || delta.cols() != d) throw DimensionError("check_haar_expectation: delta has the wrong size");
  if ((delta - delta.adjoint()).norm() > 1e-9) throw InvalidArgument("check_haar_expectation: delta is not Hermitian");
  if (std::abs(delta.trace()) > 1e-9) throw InvalidArgument("check_haar_expectation: delta is not traceless");

  double sum = 0.0;
  for (std::size_t q = 0; q < settings; ++q) {
    const ComplexMatrix u = haar_random_unitary(d, derive_seed(seed, q));
    const ComplexMatrix rotated = u.adjoint() * delta * u;
    sum += rotated.diagonal().real().squaredNorm();
  }
  return {sum / static_cast<double>(settings), delta.squaredNorm() / (static_cast<double>(d) + 1.0)};
}

namespace {

double rip_ratio(const std::vector<ComplexMatrix>& paulis, const ComplexMatrix& x) {
  const double norm2 = x.squaredNorm();
  if (!(norm2 > 0.0)) throw InvalidArgument("pauli_rip_ratio: input must be nonzero");
  double sum = 0.0;
  for (const auto& w : paulis) {
    const double v = inner(w, x).real();
    sum += v * v;
  }
  return static_cast<double>(x.rows()) / static_cast<double>(paulis.size()) * sum / norm2;
}

std::vector<ComplexMatrix> pauli_matrices(std::span<const PauliIndex> indices, Eigen::Index dim) {
  std::vector<ComplexMatrix> out;
  out.reserve(indices.size());
  for (const auto& idx : indices) {
    out.push_back(pauli_matrix(idx));
    if (out.back().rows() != dim) throw DimensionError("pauli_rip_ratio: mixed qubit counts");
  }
  return out;
}

}  // namespace

double pauli_rip_ratio(std::span<const PauliIndex> indices, const ComplexMatrix& x) {
  if (indices.empty()) throw InvalidArgument("pauli_rip_ratio: no indices");
  const Eigen::Index d = Eigen::Index{1} << indices.front().qubits();
  if (x.rows() != d || x.cols() != d) throw DimensionError("pauli_rip_ratio: input has the wrong size");
  return rip_ratio(pauli_matrices(indices, d), x);
}

RipReport check_pauli_rip(std::size_t qubits, std::size_t rank, std::size_t settings, std::size_t trials,
                          std::uint64_t seed, PauliSelection selection) {
  if (qubits < 1 || qubits > 8) throw InvalidArgument("check_pauli_rip: qubits must be in [1, 8]");
  const Eigen::Index d = Eigen::Index{1} << qubits;
  const std::size_t total = std::size_t{1} << (2 * qubits);
  if (rank < 1 || static_cast<Eigen::Index>(rank) > d) throw InvalidArgument("check_pauli_rip: rank must be in [1, 2^n]");
  if (settings < 1 || settings > total) throw InvalidArgument("check_pauli_rip: need 1 <= Q <= 4^n");
  if (trials < 1) throw InvalidArgument("check_pauli_rip: need at least one trial");

  const auto all = all_pauli_indices(qubits);
  std::vector<PauliIndex> chosen;
  if (selection == PauliSelection::full) {
    if (settings != total) throw InvalidArgument("check_pauli_rip: full selection needs Q = 4^n");
    chosen = all;
  } else {
    Rng rng(derive_seed(seed, 0));
    std::uniform_int_distribution<std::size_t> pick(0, total - 1);
    chosen.reserve(settings);
    for (std::size_t q = 0; q < settings; ++q) chosen.push_back(all[pick(rng)]);
  }

  const auto paulis = pauli_matrices(chosen, d);
  RipReport report;
  report.ratios.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, t + 1));
    const ComplexMatrix g = complex_gaussian(d, static_cast<Eigen::Index>(rank), rng);
    std::bernoulli_distribution coin(0.5);
    Eigen::VectorXd signs(static_cast<Eigen::Index>(rank));
    for (Eigen::Index i = 0; i < signs.size(); ++i) signs[i] = coin(rng) ? 1.0 : -1.0;
    ComplexMatrix x = g * signs.asDiagonal() * g.adjoint();
    x = hermitian_part(x) / x.norm();
    const double ratio = rip_ratio(paulis, x);
    report.ratios.push_back(ratio);
    report.empirical_delta = std::max(report.empirical_delta, std::abs(ratio - 1.0));
  }
  return report;
}

KlReport kl_check(const DensityMatrix& rho1, const DensityMatrix& rho2, const Povm& povm, double shots) {
  if (!(shots > 0.0)) throw InvalidArgument("kl_check: shots must be positive");
  const auto p1 = outcome_probabilities(rho1, povm).probs;
  const auto p2 = outcome_probabilities(rho2, povm).probs;
  KlReport r;
  double kl = 0.0;
  double l2 = 0.0;
  double fisher = 0.0;
  for (std::size_t k = 0; k < p1.size(); ++k) {
    const double diff = p1[k] - p2[k];
    l2 += diff * diff;
    if (p1[k] <= 0.0) continue;
    fisher += diff * diff / p1[k];
    if (p2[k] <= 0.0) {
      r.finite = false;
      continue;
    }
    kl += p1[k] * std::log(p1[k] / p2[k]);
  }
  r.kl = r.finite ? std::max(0.0, shots * kl) : std::numeric_limits<double>::infinity();
  r.l2_approx = 0.5 * shots * l2;
  r.fisher_approx = 0.5 * shots * fisher;
  r.gap = std::abs(r.kl - r.l2_approx);
  r.fisher_gap = std::abs(r.kl - r.fisher_approx);
  return r;
}

double fit_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("fit_slope: need two or more matched points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("fit_slope: x values are all equal");
  return sxy / sxx;
}

namespace {

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

ScalingReport error_scaling_sweep(const EstimatorConfig& cfg, const EnsembleSpec& ensemble,
                                  const DensityMatrix& truth, std::span<const std::uint64_t> shots_grid,
                                  std::size_t trials, std::uint64_t seed, bool noiseless) {
  if (shots_grid.size() < 3) throw InvalidArgument("error_scaling_sweep: the shot grid needs at least 3 points");
  for (std::size_t i = 0; i < shots_grid.size(); ++i) {
    if (shots_grid[i] == 0) throw InvalidArgument("error_scaling_sweep: shot counts must be positive");
    if (i > 0 && shots_grid[i] <= shots_grid[i - 1]) {
      throw InvalidArgument("error_scaling_sweep: the shot grid must be strictly increasing");
    }
  }
  if (trials < 1) throw InvalidArgument("error_scaling_sweep: need at least one trial");
  cfg.validate();

  const bool random_ensemble = is_random_scheme(ensemble.scheme);
  std::optional<PovmEnsemble> fixed;
  if (!random_ensemble) fixed = build_ensemble(ensemble, seed);

  ScalingReport report;
  report.grid.assign(shots_grid.begin(), shots_grid.end());
  for (std::size_t g = 0; g < shots_grid.size(); ++g) {
    const std::uint64_t grid_seed = derive_seed(seed, g + 1);
    std::vector<double> errors;
    for (std::size_t t = 0; t < trials; ++t) {
      const std::uint64_t trial_seed = derive_seed(grid_seed, t);
      ScalingTrial row;
      row.shots = shots_grid[g];
      row.trial = t;
      const auto start = std::chrono::steady_clock::now();
      try {
        const PovmEnsemble ens = random_ensemble ? build_ensemble(ensemble, derive_seed(trial_seed, 1)) : *fixed;
        EstimateResult est = noiseless
            ? run_estimator(cfg, ens, std::span<const OutcomeDistribution>(population_frequencies(truth, ens)))
            : run_estimator(cfg, ens,
                            std::span<const MeasurementRecord>(measure_ensemble(truth, ens, shots_grid[g], trial_seed)));
        row.frob_error = frobenius_distance(est.state, truth).value;
        row.trace_error = trace_distance(est.state, truth).value;
        row.fidelity = fidelity(est.state, truth).value;
        errors.push_back(row.frob_error);
      } catch (const Error&) {
        row.failed = true;
        ++report.failures;
      }
      row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      report.trials.push_back(row);
    }
    report.median_errors.push_back(errors.empty() ? std::numeric_limits<double>::quiet_NaN() : median_of(errors));
  }

  std::vector<double> lx, ly;
  bool floor = true;
  for (std::size_t g = 0; g < report.grid.size(); ++g) {
    const double m = report.median_errors[g];
    if (!std::isfinite(m)) continue;
    if (m > 1e-9) floor = false;
    if (m > 0.0) {
      lx.push_back(std::log(static_cast<double>(report.grid[g])));
      ly.push_back(std::log(m));
    }
  }
  report.at_floor = floor;
  if (!floor && lx.size() >= 2) report.slope = fit_slope(lx, ly);
  return report;
}

BudgetReport sample_budget(const StructureModel& model, std::size_t sites, std::size_t local_dim,
                           double epsilon, double gamma) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("sample_budget: epsilon must be in (0, 1)");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidArgument("sample_budget: gamma must be positive");
  if (sites < 1 || local_dim < 2) throw InvalidArgument("sample_budget: need n >= 1 and d >= 2");
  const auto n = static_cast<double>(sites);
  const auto d = static_cast<double>(local_dim);
  BudgetReport r;
  r.tag = to_string(model.kind);
  r.gamma = gamma;
  switch (model.kind) {
    case StructureKind::full:
      r.log_covering = std::pow(d, 2.0 * n);
      break;
    case StructureKind::low_rank:
      if (model.rank < 1) throw InvalidArgument("sample_budget: low_rank needs r >= 1");
      r.log_covering = std::pow(d, n) * static_cast<double>(model.rank);
      break;
    case StructureKind::mpo: {
      if (sites < 2) throw InvalidArgument("sample_budget: mpo needs n >= 2");
      if (model.bonds.empty()) throw InvalidArgument("sample_budget: mpo needs bond dimensions");
      const auto rbar = static_cast<double>(*std::max_element(model.bonds.begin(), model.bonds.end()));
      r.log_covering = n * d * d * rbar * rbar * std::log(n);
      break;
    }
  }
  r.recommended_shots = r.log_covering * gamma / (epsilon * epsilon);
  return r;
}

double design_gamma(const Povm& povm, const DensityMatrix& rho, int design_order) {
  if (design_order < 2) throw InvalidArgument("design_gamma: design order must be at least 2");
  if (design_order > 2) return 1.0;
  const auto p = outcome_probabilities(rho, povm).probs;
  return static_cast<double>(povm.outcomes()) * *std::max_element(p.begin(), p.end());
}

}  // namespace qst
