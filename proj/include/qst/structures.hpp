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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qst/qcore.hpp"

namespace qst {

/// Burer-Monteiro factor U (dim x rank) with ||U||_F = 1, so UU^dagger has unit trace.
struct LowRankFactor {
  ComplexMatrix factor;

  Eigen::Index dim() const { return factor.rows(); }
  Eigen::Index rank() const { return factor.cols(); }
};

/// Matrix product operator.
///
/// Entry (i_1..i_n, j_1..j_n) of the dense matrix is the ordered product
/// X_1^{i_1,j_1} X_2^{i_2,j_2} ... X_n^{i_n,j_n}, where X_l^{i,j} has shape
/// bond_dims[l-1] x bond_dims[l] and bond_dims[0] = bond_dims[n] = 1.
/// The dense row index of (i_1..i_n) is i_1 + d i_2 + ... + d^{n-1} i_n,
/// i.e. the first site is the fastest-varying digit.
struct MpoState {
  std::size_t sites = 0;
  std::size_t phys_dim = 0;
  std::vector<std::size_t> bond_dims;             // length sites + 1
  std::vector<std::vector<ComplexMatrix>> cores;  // cores[l][i * d + j]

  const ComplexMatrix& core(std::size_t site, std::size_t i, std::size_t j) const {
    return cores[site][i * phys_dim + j];
  }
  std::size_t max_bond() const;
};

enum class StructureKind { full, low_rank, mpo };

/// A structured state class: all densities, rank <= r densities, or MPOs
/// with the given internal bond dimensions (r_1..r_{n-1}).
struct StructureModel {
  StructureKind kind = StructureKind::full;
  std::size_t rank = 0;            // low_rank only
  std::vector<std::size_t> bonds;  // mpo only; sites = bonds.size() + 1
  std::size_t phys_dim = 2;        // mpo only

  static StructureModel full() { return {}; }
  static StructureModel low_rank(std::size_t r) { return {StructureKind::low_rank, r, {}, 2}; }
  static StructureModel mpo(std::vector<std::size_t> bonds, std::size_t phys_dim = 2) {
    return {StructureKind::mpo, 0, std::move(bonds), phys_dim};
  }

  std::size_t mpo_sites() const { return bonds.size() + 1; }

  /// Throws InvalidArgument unless the parameters fit an ambient dimension.
  void validate(Eigen::Index dim) const;
};

const char* to_string(StructureKind kind);

/// Parses "full", "low_rank", "mpo".
StructureKind parse_structure_kind(const std::string& name);

// ---------------------------------------------------------------------------

DensityMatrix lowrank_to_density(const LowRankFactor& f, double tol = 1e-9);

ComplexMatrix mpo_contract(const MpoState& m);

/// Contraction of an MPO that represents a physical state.
DensityMatrix mpo_to_density(const MpoState& m, const Tolerance& tol = {});

/// Euclidean projection of a real vector onto the probability simplex
/// (sort and threshold).
std::vector<double> project_onto_simplex(std::span<const double> v);

/// Frobenius-nearest density matrix to the Hermitian part of h.
DensityMatrix project_density(const ComplexMatrix& h);

/// Keeps the r largest eigenvalues of the Hermitian part of h, projects
/// them onto the simplex and zeroes the rest.
DensityMatrix project_rank_r_density(const ComplexMatrix& h, std::size_t r);

/// TT-SVD sweep (left to right) with per-bond truncation to `bonds`.
/// The bonds actually used never exceed the unfolding ranks available.
MpoState project_mpo(const ComplexMatrix& rho, std::size_t phys_dim,
                     std::span<const std::size_t> bonds);

/// Random MPO cores (complex Gaussian) with the requested shape; the
/// contraction is generally not a physical state.
MpoState random_mpo_cores(std::size_t sites, std::size_t phys_dim,
                          std::span<const std::size_t> bonds, Rng& rng);

/// Random physical state from a structure class. low_rank: normalised
/// Haar-like factor; mpo: random cores with the requested bonds followed by
/// project_density; full: normalised Wishart draw.
DensityMatrix random_structured_state(const StructureModel& model, Eigen::Index dim,
                                      std::uint64_t seed);

/// Projection onto a structure class followed by the density fix-up.
DensityMatrix project_structure(const ComplexMatrix& h, const StructureModel& model);

}  // namespace qst
