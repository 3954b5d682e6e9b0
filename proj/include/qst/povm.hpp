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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qst/qcore.hpp"

namespace qst {

/// Ordered list of PSD effects summing to the identity.
class Povm {
 public:
  Eigen::Index dim() const { return dim_; }
  std::size_t outcomes() const { return effects_.size(); }
  const std::vector<ComplexMatrix>& effects() const { return effects_; }
  const ComplexMatrix& effect(std::size_t k) const { return effects_[k]; }

 private:
  friend Povm validate_povm(std::vector<ComplexMatrix> effects, double tol);
  Povm(Eigen::Index dim, std::vector<ComplexMatrix> effects)
      : dim_(dim), effects_(std::move(effects)) {}

  Eigen::Index dim_ = 0;
  std::vector<ComplexMatrix> effects_;
};

/// Certifies a list of effects as a POVM. Throws DimensionError for unequal
/// or non-square shapes and ValidationError naming completeness and/or
/// positivity (negative_eigenvalue, non_hermitian) violations.
Povm validate_povm(std::vector<ComplexMatrix> effects, double tol = 1e-9);

/// Q measurement settings on a common Hilbert space.
struct PovmEnsemble {
  std::vector<Povm> settings;
  std::string provenance;

  std::size_t size() const { return settings.size(); }
  Eigen::Index dim() const { return settings.empty() ? 0 : settings.front().dim(); }
  std::size_t total_outcomes() const;
};

PovmEnsemble make_ensemble(std::vector<Povm> settings, std::string provenance);

/// Multi-qubit Pauli label (q_1..q_n), each entry in {0, 1, 2, 3}.
struct PauliIndex {
  std::vector<std::uint8_t> indices;

  std::size_t qubits() const { return indices.size(); }
  std::string str() const;  // e.g. "IXYZ"
  friend bool operator==(const PauliIndex&, const PauliIndex&) = default;
};

PauliIndex make_pauli_index(std::initializer_list<int> labels);

/// A 2^n-outcome Pauli-basis POVM together with the +-1 weights that
/// reassemble the Pauli observable from its effects.
struct SignedPovm {
  Povm povm;
  std::vector<int> signs;
};

// ---------------------------------------------------------------------------
// Single-qubit and generic constructions

/// Qubit SIC-POVM: (1/2)|psi_k><psi_k| for |0> and three states at polar
/// angle arccos(-1/3) with azimuths 0, 2pi/3, 4pi/3.
Povm sic_povm_qubit();

/// Six-outcome qubit 3-design POVM in the order |1>, |0>, |+>, |->, |-i>, |+i>,
/// each effect (1/3)|w><w|.
Povm design3_povm_qubit();

Povm computational_basis_povm(Eigen::Index dim);

/// Rank-one effects u_k u_k^dagger from the columns of a unitary.
Povm projective_povm_from_unitary(const ComplexMatrix& u, double tol = 1e-9);

/// All Kronecker products of local effects; outcome order is lexicographic
/// in (k_1, ..., k_n) with the first site slowest.
Povm local_tensor_povm(std::span<const Povm> locals);

/// Effects (d/K) w_k w_k^dagger from a spherical design. Requires unit
/// vectors whose frame operator (d/K) sum w w^dagger equals the identity.
Povm design_povm_from_vectors(std::span<const ComplexVector> vectors, double tol = 1e-9);

// ---------------------------------------------------------------------------
// Pauli machinery

/// sigma_q for q in {0,1,2,3}; sigma_2 = [[0, i], [-i, 0]].
const ComplexMatrix& pauli_sigma(int q);

/// W_q = sigma_{q_1} (x) ... (x) sigma_{q_n}.
ComplexMatrix pauli_matrix(const PauliIndex& p);

/// Rank-one effects E^{+-}_{q_1} (x) ... (x) E^{+-}_{q_n} with the "+" branch
/// first at every site; E_0 uses the sigma_3 eigenbasis.
SignedPovm pauli_basis_povm(const PauliIndex& p);

/// All 4^n Pauli labels, lexicographic.
std::vector<PauliIndex> all_pauli_indices(std::size_t qubits);

/// All 3^n measurement-basis labels with entries in {1, 2, 3}.
std::vector<PauliIndex> pauli_basis_indices(std::size_t qubits);

// ---------------------------------------------------------------------------
// Ensembles

/// Q projective settings from independent Haar unitaries; setting q uses
/// derive_seed(seed, q).
PovmEnsemble haar_ensemble(Eigen::Index dim, std::size_t settings, std::uint64_t seed);

/// Q settings, each a tensor product of n independent 2x2 Haar projective
/// measurements.
PovmEnsemble local_haar_ensemble(std::size_t qubits, std::size_t settings, std::uint64_t seed);

PovmEnsemble pauli_basis_ensemble(std::span<const PauliIndex> indices);

/// n-fold tensor power of a local POVM as a single-setting ensemble.
PovmEnsemble local_power_ensemble(const Povm& local, std::size_t sites, std::string provenance);

// ---------------------------------------------------------------------------
// Design-vector files
//
//   dim=<d> count=<K>
//   re,im;re,im;...      (one vector per line, d entries)
//
// Blank lines and lines starting with '#' are ignored.

struct DesignVectors {
  Eigen::Index dim = 0;
  std::vector<ComplexVector> vectors;
};

DesignVectors parse_design_vectors(std::istream& in);
DesignVectors parse_design_vectors(const std::string& text);
DesignVectors read_design_vectors(const std::filesystem::path& path);
std::string format_design_vectors(const DesignVectors& dv);

// ---------------------------------------------------------------------------
// Declarative ensemble description used by experiments and sweeps.

struct EnsembleSpec {
  /// One of: computational, sic, design3, pauli_basis, haar, local_haar, vectors.
  std::string scheme = "design3";
  std::size_t sites = 1;           // qubits (d = 2) for the built-in schemes
  std::size_t settings = 1;        // Q for haar / local_haar
  std::filesystem::path vectors_file;  // scheme == "vectors"
};

/// Builds the ensemble; random schemes draw from `seed`. Throws IoError when
/// a vector file cannot be read and InvalidArgument for unknown schemes.
PovmEnsemble build_ensemble(const EnsembleSpec& spec, std::uint64_t seed);

/// Whether the scheme draws fresh randomness per seed.
bool is_random_scheme(const std::string& scheme);

}  // namespace qst
