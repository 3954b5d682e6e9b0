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
#include <span>
#include <vector>

#include "qst/povm.hpp"
#include "qst/qcore.hpp"

namespace qst {

/// Probability vector over the outcomes of one setting.
struct OutcomeDistribution {
  std::vector<double> probs;

  std::size_t size() const { return probs.size(); }
};

/// Outcome counts from `shots` repetitions of setting `setting_index`.
struct MeasurementRecord {
  std::size_t setting_index = 0;
  std::uint64_t shots = 0;
  std::vector<std::uint64_t> counts;

  friend bool operator==(const MeasurementRecord&, const MeasurementRecord&) = default;
};

struct PauliEstimate {
  PauliIndex index;
  double value = 0.0;
  std::uint64_t shots = 0;
};

/// Checks nonnegativity and normalisation. Entries in [-1e-12, 0) are
/// clipped to zero and the vector renormalised; anything more negative, or
/// a sum off by more than 1e-9, throws InvalidArgument.
OutcomeDistribution make_distribution(std::vector<double> probs);

/// p_k = Re trace(A_k rho).
OutcomeDistribution outcome_probabilities(const DensityMatrix& rho, const Povm& povm);

/// Multinomial(M, p) via sequential binomial conditioning.
MeasurementRecord sample_counts(const OutcomeDistribution& dist, std::uint64_t shots,
                                std::uint64_t seed, std::size_t setting_index = 0);

OutcomeDistribution empirical_frequencies(const MeasurementRecord& rec);

/// One record per setting; setting q is sampled with derive_seed(seed, q).
std::vector<MeasurementRecord> measure_ensemble(const DensityMatrix& rho, const PovmEnsemble& ensemble,
                                                std::uint64_t shots_per_setting, std::uint64_t seed);

/// Per-setting shot budgets; `shots.size()` must equal the ensemble size.
std::vector<MeasurementRecord> measure_ensemble(const DensityMatrix& rho, const PovmEnsemble& ensemble,
                                                std::span<const std::uint64_t> shots, std::uint64_t seed);

/// Population (infinite-shot) distributions for every setting.
std::vector<OutcomeDistribution> population_frequencies(const DensityMatrix& rho,
                                                        const PovmEnsemble& ensemble);

std::vector<OutcomeDistribution> empirical_frequencies(std::span<const MeasurementRecord> records);

/// sum_j signs_j * phat_j, an unbiased estimate of <W_q, rho>.
PauliEstimate estimate_pauli_observable(const MeasurementRecord& rec, const SignedPovm& signed_povm,
                                        const PauliIndex& index);

/// Population-level counterpart: sum_j signs_j * p_j.
double pauli_expectation_from_probabilities(const OutcomeDistribution& dist, const SignedPovm& signed_povm);

}  // namespace qst
