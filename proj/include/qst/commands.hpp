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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qst/experiment.hpp"

namespace qst::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_fail = 1,  // a verify check did not pass
  exit_parse = 2,
  exit_numerical = 3,
  exit_io = 4,
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<std::size_t> trials;
};

void apply(const Overrides& o, ExperimentSpec& spec);

/// Paths written by a run, relative to the output directory.
struct RunResult {
  io::json result;
  std::filesystem::path out_dir;
};

/// generate -> measure -> estimate -> score; writes records.json,
/// estimate.json and result.json into spec.output.
RunResult run_experiment(const ExperimentSpec& spec);

struct SweepOptions {
  std::string param;  // shots | Q | rank
  std::vector<double> values;
  std::size_t trials = 20;
};

/// CSV text: one row per (value, trial); "# fitted_slope,<v>" when param is shots.
std::string sweep_experiment(const ExperimentSpec& spec, const SweepOptions& opt);

struct VerifyOptions {
  std::string check;  // isometry | haar | rip | kl
  std::size_t qubits = 1;
  std::string settings = "";  // integer, or "full" for rip
  std::size_t rank = 1;
  std::size_t trials = 100;
  double distance = 0.0;  // kl: Frobenius distance between the two states
  double shots = 1000.0;  // kl
  std::uint64_t seed = 1;
  std::filesystem::path out = ".";
};

struct VerifyOutcome {
  bool pass = false;
  std::string summary;
  io::json report;
};

VerifyOutcome verify_check(const VerifyOptions& opt);

// Entry points used by the executable; errors are mapped to exit codes and
// reported on `err`.
int command_run(const std::filesystem::path& spec_path, const Overrides& o, std::ostream& out, std::ostream& err);
int command_sweep(const std::filesystem::path& spec_path, const SweepOptions& opt, const Overrides& o,
                  std::ostream& out, std::ostream& err);
int command_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace qst::cli
