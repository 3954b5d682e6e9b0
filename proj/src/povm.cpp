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

#include "qst/povm.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qst {

namespace {

using namespace std::complex_literals;

ComplexMatrix mat2(cplx a, cplx b, cplx c, cplx d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

// Eigenprojectors E_q^+ and E_q^- of sigma_q; E_0 is tied to E_3.
const ComplexMatrix& pauli_projector(int q, bool plus) {
  static const ComplexMatrix table[4][2] = {
      {mat2(1, 0, 0, 0), mat2(0, 0, 0, 1)},
      {mat2(0.5, 0.5, 0.5, 0.5), mat2(0.5, -0.5, -0.5, 0.5)},
      {mat2(0.5, 0.5i, -0.5i, 0.5), mat2(0.5, -0.5i, 0.5i, 0.5)},
      {mat2(1, 0, 0, 0), mat2(0, 0, 0, 1)},
  };
  return table[q][plus ? 0 : 1];
}

void check_pauli_index(const PauliIndex& p) {
  if (p.indices.empty()) throw InvalidArgument("Pauli index: need at least one qubit");
  for (auto q : p.indices) {
    if (q > 3) throw InvalidArgument("Pauli index: entries must lie in {0,1,2,3}");
  }
}

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) out *= base;
  return out;
}

}  // namespace

Povm validate_povm(std::vector<ComplexMatrix> effects, double tol) {
  if (effects.empty()) throw DimensionError("validate_povm: no effects");
  const Eigen::Index dim = effects.front().rows();
  ComplexMatrix total = ComplexMatrix::Zero(dim, dim);
  std::vector<Violation> violations;
  std::ostringstream detail;
  detail << "validate_povm:";
  double worst_asym = 0.0;
  double worst_eig = 0.0;
  for (std::size_t k = 0; k < effects.size(); ++k) {
    const auto& a = effects[k];
    if (a.rows() != dim || a.cols() != dim || dim == 0) {
      throw DimensionError("validate_povm: effects must be square and share one dimension");
    }
    if (!a.allFinite()) throw ValidationError({Violation::non_finite}, "validate_povm: non-finite effect");
    worst_asym = std::max(worst_asym, (a - a.adjoint()).norm());
    worst_eig = std::min(worst_eig, hermitian_eigenvalues(a).minCoeff());
    total += a;
  }
  if (worst_asym > tol) {
    violations.push_back(Violation::non_hermitian);
    detail << " effect asymmetry " << worst_asym << ";";
  }
  if (worst_eig < -tol) {
    violations.push_back(Violation::negative_eigenvalue);
    detail << " effect eigenvalue " << worst_eig << ";";
  }
  const double gap = (total - ComplexMatrix::Identity(dim, dim)).norm();
  if (gap > tol) {
    violations.push_back(Violation::completeness);
    detail << " ||sum A_k - I||_F = " << gap << ";";
  }
  if (!violations.empty()) throw ValidationError(std::move(violations), detail.str());
  return Povm(dim, std::move(effects));
}

std::size_t PovmEnsemble::total_outcomes() const {
  std::size_t total = 0;
  for (const auto& s : settings) total += s.outcomes();
  return total;
}

PovmEnsemble make_ensemble(std::vector<Povm> settings, std::string provenance) {
  if (settings.empty()) throw InvalidArgument("ensemble: need at least one setting");
  for (const auto& s : settings) {
    if (s.dim() != settings.front().dim()) throw DimensionError("ensemble: settings differ in dimension");
  }
  return {std::move(settings), std::move(provenance)};
}

std::string PauliIndex::str() const {
  std::string out;
  for (auto q : indices) out.push_back("IXYZ"[q & 3]);
  return out;
}

PauliIndex make_pauli_index(std::initializer_list<int> labels) {
  PauliIndex p;
  for (int q : labels) {
    if (q < 0 || q > 3) throw InvalidArgument("Pauli index: entries must lie in {0,1,2,3}");
    p.indices.push_back(static_cast<std::uint8_t>(q));
  }
  return p;
}

Povm sic_povm_qubit() {
  const double s = std::sqrt(2.0) / 6.0;
  const double third = 1.0 / 3.0;
  const auto phase = [](double angle) { return std::polar(1.0, angle); };
  const double a1 = 2.0 * std::numbers::pi / 3.0;
  const double a2 = 4.0 * std::numbers::pi / 3.0;
  return validate_povm({
      mat2(0.5, 0, 0, 0),
      mat2(1.0 / 6.0, s, s, third),
      mat2(1.0 / 6.0, s * phase(-a1), s * phase(a1), third),
      mat2(1.0 / 6.0, s * phase(-a2), s * phase(a2), third),
  });
}

Povm design3_povm_qubit() {
  const double t = 1.0 / 3.0;
  const double s = 1.0 / 6.0;
  return validate_povm({
      mat2(0, 0, 0, t),
      mat2(t, 0, 0, 0),
      mat2(s, s, s, s),
      mat2(s, -s, -s, s),
      mat2(s, s * 1i, -s * 1i, s),
      mat2(s, -s * 1i, s * 1i, s),
  });
}

Povm computational_basis_povm(Eigen::Index dim) {
  if (dim < 1) throw InvalidArgument("computational_basis_povm: dim must be positive");
  std::vector<ComplexMatrix> effects;
  for (Eigen::Index k = 0; k < dim; ++k) {
    ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
    e(k, k) = 1.0;
    effects.push_back(std::move(e));
  }
  return validate_povm(std::move(effects));
}

Povm projective_povm_from_unitary(const ComplexMatrix& u, double tol) {
  if (!is_unitary(u, tol)) throw InvalidArgument("projective_povm_from_unitary: matrix is not unitary");
  std::vector<ComplexMatrix> effects;
  effects.reserve(static_cast<std::size_t>(u.cols()));
  for (Eigen::Index k = 0; k < u.cols(); ++k) effects.push_back(u.col(k) * u.col(k).adjoint());
  return validate_povm(std::move(effects), tol);
}

Povm local_tensor_povm(std::span<const Povm> locals) {
  if (locals.empty()) throw InvalidArgument("local_tensor_povm: empty list of local POVMs");
  std::vector<ComplexMatrix> effects = locals.front().effects();
  for (std::size_t site = 1; site < locals.size(); ++site) {
    std::vector<ComplexMatrix> next;
    next.reserve(effects.size() * locals[site].outcomes());
    for (const auto& left : effects) {
      for (const auto& right : locals[site].effects()) next.push_back(kron(left, right));
    }
    effects = std::move(next);
  }
  return validate_povm(std::move(effects));
}

Povm design_povm_from_vectors(std::span<const ComplexVector> vectors, double tol) {
  if (vectors.empty()) throw InvalidArgument("design_povm_from_vectors: no vectors");
  const Eigen::Index dim = vectors.front().size();
  const double scale = static_cast<double>(dim) / static_cast<double>(vectors.size());
  std::vector<ComplexMatrix> effects;
  ComplexMatrix frame = ComplexMatrix::Zero(dim, dim);
  for (const auto& w : vectors) {
    if (w.size() != dim || dim == 0) throw DimensionError("design_povm_from_vectors: vectors differ in dimension");
    if (std::abs(w.norm() - 1.0) > tol) {
      std::ostringstream os;
      os << "design_povm_from_vectors: vector norm " << w.norm() << " is not 1";
      throw NormalizationError(os.str());
    }
    effects.push_back(scale * (w * w.adjoint()));
    frame += effects.back();
  }
  const double gap = (frame - ComplexMatrix::Identity(dim, dim)).norm();
  if (gap > tol) {
    std::ostringstream os;
    os << "design_povm_from_vectors: frame operator differs from identity by " << gap
       << " (not a 1-design)";
    throw ValidationError({Violation::completeness}, os.str());
  }
  return validate_povm(std::move(effects), tol);
}

const ComplexMatrix& pauli_sigma(int q) {
  static const ComplexMatrix sigma[4] = {
      mat2(1, 0, 0, 1),
      mat2(0, 1, 1, 0),
      mat2(0, 1i, -1i, 0),
      mat2(1, 0, 0, -1),
  };
  if (q < 0 || q > 3) throw InvalidArgument("pauli_sigma: label must lie in {0,1,2,3}");
  return sigma[q];
}

ComplexMatrix pauli_matrix(const PauliIndex& p) {
  check_pauli_index(p);
  std::vector<ComplexMatrix> factors;
  for (auto q : p.indices) factors.push_back(pauli_sigma(q));
  return kron_all(factors);
}

SignedPovm pauli_basis_povm(const PauliIndex& p) {
  check_pauli_index(p);
  const std::size_t n = p.qubits();
  const std::size_t outcomes = std::size_t{1} << n;
  std::vector<ComplexMatrix> effects;
  std::vector<int> signs;
  effects.reserve(outcomes);
  signs.reserve(outcomes);
  std::vector<ComplexMatrix> factors(n);
  for (std::size_t j = 0; j < outcomes; ++j) {
    int sign = 1;
    for (std::size_t site = 0; site < n; ++site) {
      // Bit (n-1-site) of j selects the minus branch; first site slowest.
      const bool minus = (j >> (n - 1 - site)) & 1U;
      const int q = p.indices[site];
      factors[site] = pauli_projector(q, !minus);
      if (minus && q != 0) sign = -sign;
    }
    effects.push_back(kron_all(factors));
    signs.push_back(sign);
  }
  return {validate_povm(std::move(effects)), std::move(signs)};
}

std::vector<PauliIndex> all_pauli_indices(std::size_t qubits) {
  if (qubits < 1) throw InvalidArgument("all_pauli_indices: need at least one qubit");
  const std::size_t total = ipow(4, qubits);
  std::vector<PauliIndex> out(total);
  for (std::size_t k = 0; k < total; ++k) {
    out[k].indices.resize(qubits);
    for (std::size_t site = 0, rem = k; site < qubits; ++site, rem /= 4) {
      out[k].indices[qubits - 1 - site] = static_cast<std::uint8_t>(rem % 4);
    }
  }
  return out;
}

std::vector<PauliIndex> pauli_basis_indices(std::size_t qubits) {
  if (qubits < 1) throw InvalidArgument("pauli_basis_indices: need at least one qubit");
  const std::size_t total = ipow(3, qubits);
  std::vector<PauliIndex> out(total);
  for (std::size_t k = 0; k < total; ++k) {
    out[k].indices.resize(qubits);
    for (std::size_t site = 0, rem = k; site < qubits; ++site, rem /= 3) {
      out[k].indices[qubits - 1 - site] = static_cast<std::uint8_t>(1 + rem % 3);
    }
  }
  return out;
}

PovmEnsemble haar_ensemble(Eigen::Index dim, std::size_t settings, std::uint64_t seed) {
  if (dim < 1 || settings < 1) throw InvalidArgument("haar_ensemble: need dim >= 1 and Q >= 1");
  std::vector<Povm> out;
  out.reserve(settings);
  for (std::size_t q = 0; q < settings; ++q) {
    out.push_back(projective_povm_from_unitary(haar_random_unitary(dim, derive_seed(seed, q))));
  }
  return make_ensemble(std::move(out), "haar");
}

PovmEnsemble local_haar_ensemble(std::size_t qubits, std::size_t settings, std::uint64_t seed) {
  if (qubits < 1 || settings < 1) throw InvalidArgument("local_haar_ensemble: need n >= 1 and Q >= 1");
  std::vector<Povm> out;
  out.reserve(settings);
  for (std::size_t q = 0; q < settings; ++q) {
    Rng rng(derive_seed(seed, q));
    std::vector<Povm> locals;
    for (std::size_t site = 0; site < qubits; ++site) {
      locals.push_back(projective_povm_from_unitary(haar_random_unitary(2, rng)));
    }
    out.push_back(local_tensor_povm(locals));
  }
  return make_ensemble(std::move(out), "local_haar");
}

PovmEnsemble pauli_basis_ensemble(std::span<const PauliIndex> indices) {
  if (indices.empty()) throw InvalidArgument("pauli_basis_ensemble: no indices");
  std::vector<Povm> out;
  out.reserve(indices.size());
  for (const auto& p : indices) out.push_back(pauli_basis_povm(p).povm);
  return make_ensemble(std::move(out), "pauli_basis");
}

PovmEnsemble local_power_ensemble(const Povm& local, std::size_t sites, std::string provenance) {
  if (sites < 1) throw InvalidArgument("local_power_ensemble: need at least one site");
  std::vector<Povm> locals(sites, local);
  return make_ensemble({local_tensor_povm(locals)}, std::move(provenance));
}

bool is_random_scheme(const std::string& scheme) {
  return scheme == "haar" || scheme == "local_haar";
}

PovmEnsemble build_ensemble(const EnsembleSpec& spec, std::uint64_t seed) {
  const std::string& s = spec.scheme;
  if (s != "vectors" && spec.sites < 1) throw InvalidArgument("ensemble: sites must be >= 1");
  const auto dim = static_cast<Eigen::Index>(ipow(2, spec.sites));
  if (s == "computational") return make_ensemble({computational_basis_povm(dim)}, s);
  if (s == "sic") return local_power_ensemble(sic_povm_qubit(), spec.sites, s);
  if (s == "design3") return local_power_ensemble(design3_povm_qubit(), spec.sites, s);
  if (s == "pauli_basis") {
    const auto idx = pauli_basis_indices(spec.sites);
    return pauli_basis_ensemble(idx);
  }
  if (s == "haar") return haar_ensemble(dim, spec.settings, seed);
  if (s == "local_haar") return local_haar_ensemble(spec.sites, spec.settings, seed);
  if (s == "vectors") {
    const DesignVectors dv = read_design_vectors(spec.vectors_file);
    return make_ensemble({design_povm_from_vectors(dv.vectors)}, "vectors");
  }
  throw InvalidArgument("unknown ensemble scheme '" + s + "'");
}

}  // namespace qst
