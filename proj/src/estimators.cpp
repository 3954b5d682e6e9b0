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

#include "qst/estimators.hpp"

#include <Eigen/QR>
#include <cmath>
#include <sstream>

namespace qst {

const char* to_string(Method m) {
  switch (m) {
    case Method::pls: return "pls";
    case Method::iht: return "iht";
    case Method::factored_pgd: return "factored_pgd";
    case Method::projected_shadow: return "projected_shadow";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "pls") return Method::pls;
  if (name == "iht") return Method::iht;
  if (name == "factored_pgd") return Method::factored_pgd;
  if (name == "projected_shadow") return Method::projected_shadow;
  throw InvalidArgument("unknown estimator method '" + name + "'");
}

void EstimatorConfig::validate() const {
  if (step_size && (!std::isfinite(*step_size) || *step_size < 0.0)) {
    throw InvalidArgument("estimator: step_size must be finite and non-negative");
  }
  if (max_iters < 1) throw InvalidArgument("estimator: max_iters must be at least 1");
  if (!std::isfinite(stop_tol) || stop_tol < 0.0) throw InvalidArgument("estimator: stop_tol must be >= 0");
  if (mom_batches < 1) throw InvalidArgument("estimator: mom_batches must be at least 1");
}

namespace {

using Clock = std::chrono::steady_clock;

ComplexMatrix from_real_coordinates(const Eigen::VectorXd& x, Eigen::Index dim) {
  const auto basis = hermitian_basis(dim);
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (std::size_t b = 0; b < basis.size(); ++b) out += x[static_cast<Eigen::Index>(b)] * basis[b];
  return out;
}

double resolve_step(const EstimatorConfig& cfg, const MeasurementMap& map, double scale) {
  if (cfg.step_size) return *cfg.step_size;
  const double l = map.lipschitz();
  if (!(l > 0.0)) throw InvalidArgument("estimator: measurement map is zero; cannot choose a step size");
  return scale / l;
}

bool converged(double prev, double cur, double tol) {
  return std::abs(prev - cur) <= tol * prev;
}

void check_divergence(double r, double initial, std::size_t iter) {
  if (!std::isfinite(r) || r > 10.0 * std::max(initial, 1e-12)) {
    std::ostringstream os;
    os << "estimator diverged at iteration " << iter << " (loss " << r << ", initial " << initial
       << "); reduce step_size";
    throw DivergenceError(os.str());
  }
}

}  // namespace

ComplexMatrix least_squares(const PovmEnsemble& ensemble, std::span<const OutcomeDistribution> freqs) {
  const MeasurementMap map(ensemble);
  const RealVector p = stack_frequencies(ensemble, freqs);
  const Eigen::MatrixXd a = map.real_matrix();
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
  cod.setThreshold(1e-12);
  const Eigen::VectorXd x = cod.solve(p);
  return hermitian_part(from_real_coordinates(x, map.dim()));
}

EstimateResult projected_least_squares(const PovmEnsemble& ensemble,
                                       std::span<const OutcomeDistribution> freqs) {
  const auto start = Clock::now();
  const ComplexMatrix ls = least_squares(ensemble, freqs);
  DensityMatrix rho = project_density(ls);
  const MeasurementMap map(ensemble);
  const double r = least_squares_loss(map, rho.matrix(), stack_frequencies(ensemble, freqs));
  return {to_string(Method::pls), std::move(rho), 1, {r}, Clock::now() - start};
}

EstimateResult iht(const PovmEnsemble& ensemble, std::span<const OutcomeDistribution> freqs,
                   const StructureModel& structure, const EstimatorConfig& cfg,
                   const std::optional<ComplexMatrix>& init) {
  cfg.validate();
  const auto start = Clock::now();
  const MeasurementMap map(ensemble);
  structure.validate(map.dim());
  const RealVector p = stack_frequencies(ensemble, freqs);
  const double mu = resolve_step(cfg, map, 1.0);

  ComplexMatrix rho;
  if (init) {
    if (init->rows() != map.dim() || init->cols() != map.dim()) {
      throw DimensionError("iht: initial state has the wrong dimension");
    }
    rho = project_structure(hermitian_part(*init), structure).matrix();
  } else {
    rho = project_structure(least_squares(ensemble, freqs), structure).matrix();
  }

  std::vector<double> residuals{least_squares_loss(map, rho, p)};
  const double initial = residuals.front();
  std::size_t iter = 0;
  while (iter < cfg.max_iters) {
    ++iter;
    const ComplexMatrix grad = map.adjoint(map.forward(rho) - p);
    rho = project_structure(hermitian_part(rho - mu * grad), structure).matrix();
    const double r = least_squares_loss(map, rho, p);
    check_divergence(r, initial, iter);
    const double prev = residuals.back();
    residuals.push_back(r);
    if (converged(prev, r, cfg.stop_tol)) break;
  }
  return {to_string(Method::iht), DensityMatrix::assume_valid(std::move(rho)), iter, std::move(residuals),
          Clock::now() - start};
}

ComplexMatrix factored_gradient(const MeasurementMap& map, const RealVector& p, const ComplexMatrix& u) {
  const ComplexMatrix rho = u * u.adjoint();
  return 2.0 * map.adjoint(map.forward(rho) - p) * u;
}

EstimateResult factored_pgd(const PovmEnsemble& ensemble, std::span<const OutcomeDistribution> freqs,
                            std::size_t rank, const EstimatorConfig& cfg,
                            const std::optional<ComplexMatrix>& init) {
  cfg.validate();
  const auto start = Clock::now();
  const MeasurementMap map(ensemble);
  const Eigen::Index dim = map.dim();
  if (rank < 1 || static_cast<Eigen::Index>(rank) > dim) {
    throw InvalidArgument("factored_pgd: rank must be in [1, dim]");
  }
  const auto r = static_cast<Eigen::Index>(rank);
  const RealVector p = stack_frequencies(ensemble, freqs);
  const double mu = resolve_step(cfg, map, 0.25);

  ComplexMatrix u;
  if (init) {
    if (init->rows() != dim || init->cols() != r) throw DimensionError("factored_pgd: initial factor must be dim x r");
    u = *init;
  } else {
    const DensityMatrix start_state = project_density(least_squares(ensemble, freqs));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(start_state.matrix());
    u.resize(dim, r);
    for (Eigen::Index c = 0; c < r; ++c) {
      const Eigen::Index src = dim - 1 - c;
      u.col(c) = es.eigenvectors().col(src) * std::sqrt(std::max(es.eigenvalues()[src], 0.0));
    }
  }
  double norm = u.norm();
  if (!(norm > 0.0)) {
    // Degenerate start; fall back to the maximally mixed direction.
    u = ComplexMatrix::Identity(dim, r);
    norm = u.norm();
  }
  u /= norm;

  std::vector<double> residuals{least_squares_loss(map, u * u.adjoint(), p)};
  const double initial = residuals.front();
  std::size_t iter = 0;
  while (iter < cfg.max_iters) {
    ++iter;
    u -= mu * factored_gradient(map, p, u);
    norm = u.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) check_divergence(INFINITY, initial, iter);
    u /= norm;
    const double res = least_squares_loss(map, u * u.adjoint(), p);
    check_divergence(res, initial, iter);
    const double prev = residuals.back();
    residuals.push_back(res);
    if (converged(prev, res, cfg.stop_tol)) break;
  }
  ComplexMatrix rho = hermitian_part(u * u.adjoint());
  return {to_string(Method::factored_pgd), DensityMatrix::assume_valid(std::move(rho)), iter,
          std::move(residuals), Clock::now() - start};
}

namespace {

std::vector<ShadowSnapshot> snapshots_from_frequencies(const PovmEnsemble& ensemble,
                                                       std::span<const OutcomeDistribution> freqs) {
  if (ensemble.provenance != "haar") {
    throw InvalidArgument("projected_shadow needs a global Haar ensemble (got '" + ensemble.provenance + "')");
  }
  if (freqs.size() != ensemble.size()) throw DimensionError("projected_shadow: one distribution per setting required");
  std::vector<ShadowSnapshot> out;
  out.reserve(freqs.size());
  for (std::size_t q = 0; q < freqs.size(); ++q) out.push_back(shadow_from_frequencies(ensemble.settings[q], freqs[q]));
  return out;
}

}  // namespace

EstimateResult run_estimator(const EstimatorConfig& cfg, const PovmEnsemble& ensemble,
                             std::span<const OutcomeDistribution> freqs) {
  cfg.validate();
  switch (cfg.method) {
    case Method::pls:
      return projected_least_squares(ensemble, freqs);
    case Method::iht:
      return iht(ensemble, freqs, cfg.structure, cfg);
    case Method::factored_pgd: {
      std::size_t rank = static_cast<std::size_t>(ensemble.dim());
      if (cfg.structure.kind == StructureKind::low_rank) rank = cfg.structure.rank;
      else if (cfg.structure.kind == StructureKind::mpo) {
        throw InvalidArgument("factored_pgd works with full or low_rank structure only");
      }
      return factored_pgd(ensemble, freqs, rank, cfg);
    }
    case Method::projected_shadow: {
      const auto snaps = snapshots_from_frequencies(ensemble, freqs);
      return projected_shadow(snaps, cfg.structure);
    }
  }
  throw InvalidArgument("unknown estimator method");
}

EstimateResult run_estimator(const EstimatorConfig& cfg, const PovmEnsemble& ensemble,
                             std::span<const MeasurementRecord> records) {
  if (records.size() != ensemble.size()) throw DimensionError("estimator: one record per setting required");
  for (std::size_t q = 0; q < records.size(); ++q) {
    if (records[q].setting_index != q) throw InvalidArgument("estimator: records must be ordered by setting");
  }
  const auto freqs = empirical_frequencies(records);
  return run_estimator(cfg, ensemble, std::span<const OutcomeDistribution>(freqs));
}

}  // namespace qst
