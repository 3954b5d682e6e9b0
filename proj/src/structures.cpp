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

#include "qst/structures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qst {

namespace {

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) out *= base;
  return out;
}

// Largest rank the l-th bond (between sites l and l+1, 1-based l) can carry.
std::size_t max_bond_at(std::size_t phys_dim, std::size_t sites, std::size_t l) {
  const std::size_t d2 = phys_dim * phys_dim;
  return std::min(ipow(d2, l), ipow(d2, sites - l));
}

void check_mpo_shape(const MpoState& m) {
  const std::size_t d2 = m.phys_dim * m.phys_dim;
  if (m.sites == 0 || m.phys_dim == 0) throw DimensionError("MPO: empty shape");
  if (m.bond_dims.size() != m.sites + 1 || m.cores.size() != m.sites) {
    throw DimensionError("MPO: bond/core count does not match site count");
  }
  if (m.bond_dims.front() != 1 || m.bond_dims.back() != 1) {
    throw DimensionError("MPO: boundary bond dimensions must be 1");
  }
  for (std::size_t l = 0; l < m.sites; ++l) {
    if (m.cores[l].size() != d2) throw DimensionError("MPO: wrong number of local matrices");
    for (const auto& x : m.cores[l]) {
      if (static_cast<std::size_t>(x.rows()) != m.bond_dims[l] ||
          static_cast<std::size_t>(x.cols()) != m.bond_dims[l + 1]) {
        std::ostringstream os;
        os << "MPO: core at site " << l << " has shape " << x.rows() << "x" << x.cols()
           << ", expected " << m.bond_dims[l] << "x" << m.bond_dims[l + 1];
        throw DimensionError(os.str());
      }
    }
  }
}

ComplexMatrix random_local_density(std::size_t d, Rng& rng) {
  const ComplexMatrix g = complex_gaussian(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d), rng);
  ComplexMatrix w = g * g.adjoint();
  return w / w.trace().real();
}

std::vector<double> random_probability_vector(std::size_t n, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> p(n);
  double total = 0.0;
  for (auto& x : p) total += (x = expo(rng));
  for (auto& x : p) x /= total;
  return p;
}

// Hidden-Markov style MPO: a classical Markov chain over bond states selects
// a local density per site. The contraction is PSD with unit trace and has
// the requested bonds generically.
MpoState random_physical_mpo(std::size_t sites, std::size_t d, std::span<const std::size_t> bonds,
                             Rng& rng) {
  MpoState m;
  m.sites = sites;
  m.phys_dim = d;
  m.bond_dims.assign(sites + 1, 1);
  for (std::size_t l = 0; l + 1 < sites; ++l) m.bond_dims[l + 1] = bonds[l];
  m.cores.resize(sites);
  for (std::size_t l = 0; l < sites; ++l) {
    const auto left = static_cast<Eigen::Index>(m.bond_dims[l]);
    const auto right = static_cast<Eigen::Index>(m.bond_dims[l + 1]);
    // Transition weights T[a, b]; rows are probability vectors.
    Eigen::MatrixXd transition(left, right);
    for (Eigen::Index a = 0; a < left; ++a) {
      const auto row = random_probability_vector(static_cast<std::size_t>(right), rng);
      for (Eigen::Index b = 0; b < right; ++b) transition(a, b) = row[static_cast<std::size_t>(b)];
    }
    // One local density per bond state that the site emits from.
    const bool last = l + 1 == sites;
    const Eigen::Index emitters = last ? left : right;
    std::vector<ComplexMatrix> local;
    for (Eigen::Index s = 0; s < emitters; ++s) local.push_back(random_local_density(d, rng));

    m.cores[l].assign(d * d, ComplexMatrix::Zero(left, right));
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        ComplexMatrix& x = m.cores[l][i * d + j];
        for (Eigen::Index a = 0; a < left; ++a) {
          for (Eigen::Index b = 0; b < right; ++b) {
            const auto& sigma = local[static_cast<std::size_t>(last ? a : b)];
            x(a, b) = transition(a, b) * sigma(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
          }
        }
      }
    }
  }
  return m;
}

}  // namespace

std::size_t MpoState::max_bond() const {
  return bond_dims.empty() ? 0 : *std::max_element(bond_dims.begin(), bond_dims.end());
}

const char* to_string(StructureKind kind) {
  switch (kind) {
    case StructureKind::full: return "full";
    case StructureKind::low_rank: return "low_rank";
    case StructureKind::mpo: return "mpo";
  }
  return "unknown";
}

StructureKind parse_structure_kind(const std::string& name) {
  if (name == "full") return StructureKind::full;
  if (name == "low_rank") return StructureKind::low_rank;
  if (name == "mpo") return StructureKind::mpo;
  throw InvalidArgument("unknown structure kind '" + name + "'");
}

void StructureModel::validate(Eigen::Index dim) const {
  if (dim < 1) throw InvalidArgument("structure: dimension must be positive");
  switch (kind) {
    case StructureKind::full:
      return;
    case StructureKind::low_rank:
      if (rank < 1 || rank > static_cast<std::size_t>(dim)) {
        std::ostringstream os;
        os << "structure: rank " << rank << " outside [1, " << dim << "]";
        throw InvalidArgument(os.str());
      }
      return;
    case StructureKind::mpo: {
      if (phys_dim < 2) throw InvalidArgument("structure: MPO physical dimension must be >= 2");
      const std::size_t sites = mpo_sites();
      if (ipow(phys_dim, sites) != static_cast<std::size_t>(dim)) {
        std::ostringstream os;
        os << "structure: MPO with " << sites << " sites of dimension " << phys_dim
           << " does not match ambient dimension " << dim;
        throw InvalidArgument(os.str());
      }
      for (std::size_t l = 0; l < bonds.size(); ++l) {
        if (bonds[l] < 1 || bonds[l] > max_bond_at(phys_dim, sites, l + 1)) {
          std::ostringstream os;
          os << "structure: bond " << l + 1 << " = " << bonds[l] << " outside [1, "
             << max_bond_at(phys_dim, sites, l + 1) << "]";
          throw InvalidArgument(os.str());
        }
      }
      return;
    }
  }
}

DensityMatrix lowrank_to_density(const LowRankFactor& f, double tol) {
  if (f.dim() == 0 || f.rank() == 0) throw DimensionError("lowrank_to_density: empty factor");
  const double norm = f.factor.norm();
  if (std::abs(norm - 1.0) > tol) {
    std::ostringstream os;
    os << "lowrank_to_density: ||U||_F = " << norm << " differs from 1";
    throw NormalizationError(os.str());
  }
  return DensityMatrix::assume_valid(f.factor * f.factor.adjoint());
}

ComplexMatrix mpo_contract(const MpoState& m) {
  check_mpo_shape(m);
  const std::size_t d = m.phys_dim;
  const std::size_t dim = ipow(d, m.sites);
  ComplexMatrix out(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  std::vector<std::size_t> rows(m.sites), cols(m.sites);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t l = 0, rem = r; l < m.sites; ++l, rem /= d) rows[l] = rem % d;
    for (std::size_t c = 0; c < dim; ++c) {
      for (std::size_t l = 0, rem = c; l < m.sites; ++l, rem /= d) cols[l] = rem % d;
      Eigen::RowVectorXcd acc = m.core(0, rows[0], cols[0]).row(0);
      for (std::size_t l = 1; l < m.sites; ++l) acc = acc * m.core(l, rows[l], cols[l]);
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc(0);
    }
  }
  return out;
}

DensityMatrix mpo_to_density(const MpoState& m, const Tolerance& tol) {
  return validate_density(mpo_contract(m), tol);
}

std::vector<double> project_onto_simplex(std::span<const double> v) {
  if (v.empty()) throw InvalidArgument("project_onto_simplex: empty vector");
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) theta = candidate;
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - theta, 0.0);
  return out;
}

DensityMatrix project_density(const ComplexMatrix& h) {
  if (h.rows() != h.cols() || h.rows() == 0) throw DimensionError("project_density: need a square matrix");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(h));
  const RealVector& lambda = es.eigenvalues();
  const auto projected = project_onto_simplex(std::span<const double>(lambda.data(), lambda.size()));
  const RealVector p = Eigen::Map<const RealVector>(projected.data(), lambda.size());
  ComplexMatrix rho = es.eigenvectors() * p.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  return DensityMatrix::assume_valid(hermitian_part(rho));
}

DensityMatrix project_rank_r_density(const ComplexMatrix& h, std::size_t r) {
  if (h.rows() != h.cols() || h.rows() == 0) throw DimensionError("project_rank_r_density: need a square matrix");
  const auto dim = static_cast<std::size_t>(h.rows());
  if (r < 1 || r > dim) {
    std::ostringstream os;
    os << "project_rank_r_density: rank " << r << " outside [1, " << dim << "]";
    throw InvalidArgument(os.str());
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(h));
  // Eigenvalues are ascending; the top r sit at the end.
  const RealVector& lambda = es.eigenvalues();
  const RealVector top = lambda.tail(static_cast<Eigen::Index>(r));
  const auto projected = project_onto_simplex(std::span<const double>(top.data(), top.size()));
  const auto v = es.eigenvectors().rightCols(static_cast<Eigen::Index>(r));
  const RealVector p = Eigen::Map<const RealVector>(projected.data(), top.size());
  ComplexMatrix rho = v * p.cast<cplx>().asDiagonal() * v.adjoint();
  return DensityMatrix::assume_valid(hermitian_part(rho));
}

MpoState project_mpo(const ComplexMatrix& rho, std::size_t phys_dim,
                     std::span<const std::size_t> bonds) {
  const std::size_t sites = bonds.size() + 1;
  const std::size_t d = phys_dim;
  const std::size_t d2 = d * d;
  const std::size_t dim = ipow(d, sites);
  if (phys_dim < 1 || rho.rows() != rho.cols() || static_cast<std::size_t>(rho.rows()) != dim) {
    std::ostringstream os;
    os << "project_mpo: a " << rho.rows() << "x" << rho.cols() << " matrix is not " << sites
       << " sites of dimension " << phys_dim;
    throw DimensionError(os.str());
  }
  for (std::size_t b : bonds) {
    if (b < 1) throw InvalidArgument("project_mpo: bond dimensions must be >= 1");
  }

  // Site-major tensor: flat index sum_l m_l (d^2)^{n-1-l}, m_l = i_l d + j_l.
  std::vector<cplx> tensor(dim * dim);
  std::vector<std::size_t> rows(sites), cols(sites);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t l = 0, rem = r; l < sites; ++l, rem /= d) rows[l] = rem % d;
    for (std::size_t c = 0; c < dim; ++c) {
      for (std::size_t l = 0, rem = c; l < sites; ++l, rem /= d) cols[l] = rem % d;
      std::size_t flat = 0;
      for (std::size_t l = 0; l < sites; ++l) flat = flat * d2 + rows[l] * d + cols[l];
      tensor[flat] = rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }

  MpoState m;
  m.sites = sites;
  m.phys_dim = d;
  m.bond_dims.assign(sites + 1, 1);
  m.cores.resize(sites);

  std::size_t rest = dim * dim / d2;
  ComplexMatrix unfolding(static_cast<Eigen::Index>(d2), static_cast<Eigen::Index>(rest));
  for (std::size_t a = 0; a < d2; ++a) {
    for (std::size_t c = 0; c < rest; ++c) {
      unfolding(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c)) = tensor[a * rest + c];
    }
  }

  for (std::size_t l = 0; l + 1 < sites; ++l) {
    const std::size_t left = m.bond_dims[l];
    Eigen::BDCSVD<ComplexMatrix> svd(unfolding, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto available = static_cast<std::size_t>(std::min(unfolding.rows(), unfolding.cols()));
    const std::size_t keep = std::min(bonds[l], available);
    const auto k = static_cast<Eigen::Index>(keep);
    m.bond_dims[l + 1] = keep;

    const ComplexMatrix u = svd.matrixU().leftCols(k);
    m.cores[l].assign(d2, ComplexMatrix(static_cast<Eigen::Index>(left), k));
    for (std::size_t a = 0; a < left; ++a) {
      for (std::size_t mm = 0; mm < d2; ++mm) {
        m.cores[l][mm].row(static_cast<Eigen::Index>(a)) = u.row(static_cast<Eigen::Index>(a * d2 + mm));
      }
    }

    const ComplexMatrix carry = svd.singularValues().head(k).cast<cplx>().asDiagonal() *
                                svd.matrixV().leftCols(k).adjoint();
    const std::size_t next_rest = rest / d2;
    ComplexMatrix next(k * static_cast<Eigen::Index>(d2), static_cast<Eigen::Index>(next_rest));
    for (Eigen::Index b = 0; b < k; ++b) {
      for (std::size_t mm = 0; mm < d2; ++mm) {
        for (std::size_t c = 0; c < next_rest; ++c) {
          next(b * static_cast<Eigen::Index>(d2) + static_cast<Eigen::Index>(mm), static_cast<Eigen::Index>(c)) =
              carry(b, static_cast<Eigen::Index>(mm * next_rest + c));
        }
      }
    }
    unfolding = std::move(next);
    rest = next_rest;
  }

  const std::size_t left = m.bond_dims[sites - 1];
  m.cores[sites - 1].assign(d2, ComplexMatrix(static_cast<Eigen::Index>(left), 1));
  for (std::size_t a = 0; a < left; ++a) {
    for (std::size_t mm = 0; mm < d2; ++mm) {
      m.cores[sites - 1][mm](static_cast<Eigen::Index>(a), 0) =
          unfolding(static_cast<Eigen::Index>(a * d2 + mm), 0);
    }
  }
  return m;
}

MpoState random_mpo_cores(std::size_t sites, std::size_t phys_dim,
                          std::span<const std::size_t> bonds, Rng& rng) {
  if (sites < 1 || phys_dim < 1 || bonds.size() + 1 != sites) {
    throw InvalidArgument("random_mpo_cores: need sites >= 1 and sites - 1 bond dimensions");
  }
  MpoState m;
  m.sites = sites;
  m.phys_dim = phys_dim;
  m.bond_dims.assign(sites + 1, 1);
  for (std::size_t l = 0; l + 1 < sites; ++l) m.bond_dims[l + 1] = bonds[l];
  m.cores.resize(sites);
  for (std::size_t l = 0; l < sites; ++l) {
    for (std::size_t k = 0; k < phys_dim * phys_dim; ++k) {
      m.cores[l].push_back(complex_gaussian(static_cast<Eigen::Index>(m.bond_dims[l]),
                                            static_cast<Eigen::Index>(m.bond_dims[l + 1]), rng));
    }
  }
  return m;
}

DensityMatrix random_structured_state(const StructureModel& model, Eigen::Index dim,
                                      std::uint64_t seed) {
  model.validate(dim);
  Rng rng(seed);
  switch (model.kind) {
    case StructureKind::full: {
      const ComplexMatrix g = complex_gaussian(dim, dim, rng);
      ComplexMatrix w = g * g.adjoint();
      w /= w.trace().real();
      return DensityMatrix::assume_valid(hermitian_part(w));
    }
    case StructureKind::low_rank: {
      ComplexMatrix u = complex_gaussian(dim, static_cast<Eigen::Index>(model.rank), rng);
      u /= u.norm();
      return lowrank_to_density({std::move(u)});
    }
    case StructureKind::mpo: {
      const MpoState m = random_physical_mpo(model.mpo_sites(), model.phys_dim, model.bonds, rng);
      return project_density(mpo_contract(m));
    }
  }
  throw InvalidArgument("random_structured_state: unknown structure");
}

DensityMatrix project_structure(const ComplexMatrix& h, const StructureModel& model) {
  model.validate(h.rows());
  switch (model.kind) {
    case StructureKind::full:
      return project_density(h);
    case StructureKind::low_rank:
      return project_rank_r_density(h, model.rank);
    case StructureKind::mpo: {
      const MpoState m = project_mpo(hermitian_part(h), model.phys_dim, model.bonds);
      return project_density(mpo_contract(m));
    }
  }
  throw InvalidArgument("project_structure: unknown structure");
}

}  // namespace qst
