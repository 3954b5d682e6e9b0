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
#include <string>

#include "qst/estimators.hpp"
#include "qst/povm.hpp"
#include "qst/serialize.hpp"
#include "qst/structures.hpp"

namespace qst {

/// Ground-truth state: a random member of a structure class, or an explicit
/// matrix file (a JSON nested [re, im] array).
struct StateSpec {
  std::size_t sites = 1;
  std::size_t phys_dim = 2;
  StructureModel structure = StructureModel::full();
  std::filesystem::path matrix_file;

  Eigen::Index dim() const;
};

/// Seed derivation indices for the stages of a run.
enum SeedStream : std::uint64_t {
  seed_state = 1,
  seed_ensemble = 2,
  seed_measure = 3,
  seed_sweep = 4,
};

struct ExperimentSpec {
  std::string name;
  std::uint64_t seed = 0;
  StateSpec state;
  EnsembleSpec ensemble;
  std::uint64_t shots = 1000;
  EstimatorConfig estimator;
  std::filesystem::path output = "out";
};

/// Strict parse: "version": 1 and "seed" are required, unknown keys throw
/// ParseError.
ExperimentSpec parse_experiment(const io::json& j);
ExperimentSpec parse_experiment(const std::string& text);

/// Canonical form; parse_experiment(experiment_to_json(s)) reproduces s.
io::json experiment_to_json(const ExperimentSpec& spec);

/// Reads and parses an experiment file. Relative paths inside it are resolved
/// against the file's directory.
ExperimentSpec load_experiment(const std::filesystem::path& path);

/// Ground truth for the experiment (seeded from derive_seed(seed, seed_state)).
DensityMatrix make_truth(const ExperimentSpec& spec);

PovmEnsemble make_ensemble(const ExperimentSpec& spec);

}  // namespace qst
