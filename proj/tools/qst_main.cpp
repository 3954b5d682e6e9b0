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

#include <iostream>

#include <CLI11.hpp>

#include "qst/commands.hpp"

int main(int argc, char** argv) {
  using namespace qst::cli;

  CLI::App app{"qst: quantum state tomography simulator and verifier"};
  app.require_subcommand(1);

  Overrides overrides;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::size_t trials = 0;

  std::string spec_path;
  auto* run = app.add_subcommand("run", "Simulate, estimate and score one experiment file");
  run->add_option("spec", spec_path, "Experiment file (JSON)")->required();
  run->add_option("--seed", seed, "Override the experiment seed");
  run->add_option("--out", out_dir, "Override the output directory");

  SweepOptions sweep_opt;
  auto* sweep = app.add_subcommand("sweep", "Repeat an experiment over a parameter grid and write CSV");
  sweep->add_option("spec", spec_path, "Experiment file (JSON)")->required();
  sweep->add_option("--param", sweep_opt.param, "Grid parameter: shots, Q or rank")->required();
  sweep->add_option("--values", sweep_opt.values, "Grid values, space or comma separated")
      ->required()
      ->expected(1, -1)
      ->delimiter(',');
  sweep->add_option("--seed", seed, "Override the experiment seed");
  sweep->add_option("--out", out_dir, "Override the output directory");
  sweep->add_option("--trials", trials, "Trials per grid value (default 20)");

  VerifyOptions verify_opt;
  std::size_t verify_trials = 0;
  auto* verify = app.add_subcommand("verify", "Numerical checks of the measurement geometry");
  verify->add_option("check", verify_opt.check, "isometry, haar, rip or kl")
      ->required()
      ->check(CLI::IsMember({"isometry", "haar", "rip", "kl"}));
  verify->add_option("--n", verify_opt.qubits, "Number of qubits");
  verify->add_option("--q", verify_opt.settings, "Settings: an integer, or 'full' for rip");
  verify->add_option("--r", verify_opt.rank, "Rank of the rip test matrices");
  verify->add_option("--distance", verify_opt.distance, "kl: Frobenius distance between the states");
  verify->add_option("--shots", verify_opt.shots, "kl: number of shots M");
  verify->add_option("--seed", verify_opt.seed, "Seed");
  verify->add_option("--out", verify_opt.out, "Directory for the report JSON");
  verify->add_option("--trials", verify_trials, "Random trials");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_parse;
  }

  if (!run->parsed() && !sweep->parsed() && !verify->parsed()) return exit_parse;
  auto* active = run->parsed() ? run : sweep->parsed() ? sweep : verify;
  if (active != verify) {
    if (active->count("--seed")) overrides.seed = seed;
    if (active->count("--out")) overrides.out = out_dir;
    if (active == sweep && sweep->count("--trials")) overrides.trials = trials;
  }

  if (run->parsed()) return command_run(spec_path, overrides, std::cout, std::cerr);
  if (sweep->parsed()) return command_sweep(spec_path, sweep_opt, overrides, std::cout, std::cerr);
  if (verify->count("--trials")) verify_opt.trials = verify_trials;
  return command_verify(verify_opt, std::cout, std::cerr);
}
