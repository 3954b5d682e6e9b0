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

#include "qst/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace qst {

namespace {

constexpr double kClipFloor = -1e-12;
constexpr double kSumTol = 1e-9;
constexpr double kImagTol = 1e-10;

}  // namespace

OutcomeDistribution make_distribution(std::vector<double> probs) {
  if (probs.empty()) throw InvalidArgument("distribution: no outcomes");
  double total = 0.0;
  bool clipped = false;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    double& p = probs[k];
    if (!std::isfinite(p) || p < kClipFloor) {
      std::ostringstream os;
      os << "distribution: probability " << p << " at outcome " << k << " is invalid";
      throw InvalidArgument(os.str());
    }
    if (p < 0.0) {
      p = 0.0;
      clipped = true;
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kSumTol) {
    std::ostringstream os;
    os << "distribution: probabilities sum to " << total;
    throw InvalidArgument(os.str());
  }
  if (clipped) {
    for (double& p : probs) p /= total;
  }
  return {std::move(probs)};
}

OutcomeDistribution outcome_probabilities(const DensityMatrix& rho, const Povm& povm) {
  if (rho.dim() != povm.dim()) throw DimensionError("outcome_probabilities: state and POVM dimensions differ");
  std::vector<double> probs;
  probs.reserve(povm.outcomes());
  for (const auto& a : povm.effects()) {
    const cplx p = inner(a, rho.matrix());
    if (std::abs(p.imag()) > kImagTol) {
      throw InvalidArgument("outcome_probabilities: non-negligible imaginary probability");
    }
    probs.push_back(p.real());
  }
  return make_distribution(std::move(probs));
}

MeasurementRecord sample_counts(const OutcomeDistribution& dist, std::uint64_t shots,
                                std::uint64_t seed, std::size_t setting_index) {
  if (shots == 0) throw InvalidArgument("sample_counts: need at least one shot");
  const OutcomeDistribution checked = make_distribution(dist.probs);
  Rng rng(seed);
  MeasurementRecord rec{setting_index, shots, std::vector<std::uint64_t>(checked.size(), 0)};
  std::uint64_t remaining = shots;
  double mass = 1.0;
  for (std::size_t k = 0; k + 1 < checked.size() && remaining > 0; ++k) {
    const double p = checked.probs[k];
    const double conditional = mass > 0.0 ? std::clamp(p / mass, 0.0, 1.0) : 0.0;
    std::binomial_distribution<std::uint64_t> binom(remaining, conditional);
    const std::uint64_t draw = conditional >= 1.0 ? remaining : binom(rng);
    rec.counts[k] = draw;
    remaining -= draw;
    mass -= p;
  }
  rec.counts.back() += remaining;
  return rec;
}

OutcomeDistribution empirical_frequencies(const MeasurementRecord& rec) {
  if (rec.shots == 0) throw InvalidArgument("empirical_frequencies: record has zero shots");
  std::uint64_t total = 0;
  for (auto c : rec.counts) total += c;
  if (total != rec.shots) throw InvalidArgument("empirical_frequencies: counts do not sum to shots");
  std::vector<double> freqs(rec.counts.size());
  const auto m = static_cast<double>(rec.shots);
  for (std::size_t k = 0; k < freqs.size(); ++k) freqs[k] = static_cast<double>(rec.counts[k]) / m;
  return {std::move(freqs)};
}

std::vector<MeasurementRecord> measure_ensemble(const DensityMatrix& rho, const PovmEnsemble& ensemble,
                                                std::span<const std::uint64_t> shots, std::uint64_t seed) {
  if (shots.size() != ensemble.size()) {
    throw DimensionError("measure_ensemble: need one shot budget per setting");
  }
  std::vector<MeasurementRecord> records;
  records.reserve(ensemble.size());
  for (std::size_t q = 0; q < ensemble.size(); ++q) {
    const auto dist = outcome_probabilities(rho, ensemble.settings[q]);
    records.push_back(sample_counts(dist, shots[q], derive_seed(seed, q), q));
  }
  return records;
}

std::vector<MeasurementRecord> measure_ensemble(const DensityMatrix& rho, const PovmEnsemble& ensemble,
                                                std::uint64_t shots_per_setting, std::uint64_t seed) {
  const std::vector<std::uint64_t> shots(ensemble.size(), shots_per_setting);
  return measure_ensemble(rho, ensemble, shots, seed);
}

std::vector<OutcomeDistribution> population_frequencies(const DensityMatrix& rho,
                                                        const PovmEnsemble& ensemble) {
  std::vector<OutcomeDistribution> out;
  out.reserve(ensemble.size());
  for (const auto& s : ensemble.settings) out.push_back(outcome_probabilities(rho, s));
  return out;
}

std::vector<OutcomeDistribution> empirical_frequencies(std::span<const MeasurementRecord> records) {
  std::vector<OutcomeDistribution> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(empirical_frequencies(r));
  return out;
}

double pauli_expectation_from_probabilities(const OutcomeDistribution& dist, const SignedPovm& signed_povm) {
  if (dist.size() != signed_povm.signs.size()) {
    throw DimensionError("Pauli estimate: outcome count does not match the signed POVM");
  }
  double value = 0.0;
  for (std::size_t j = 0; j < dist.size(); ++j) value += signed_povm.signs[j] * dist.probs[j];
  return value;
}

PauliEstimate estimate_pauli_observable(const MeasurementRecord& rec, const SignedPovm& signed_povm,
                                        const PauliIndex& index) {
  if (rec.counts.size() != signed_povm.signs.size()) {
    throw DimensionError("estimate_pauli_observable: outcome count does not match the signed POVM");
  }
  const double value = pauli_expectation_from_probabilities(empirical_frequencies(rec), signed_povm);
  return {index, std::clamp(value, -1.0, 1.0), rec.shots};
}

}  // namespace qst
