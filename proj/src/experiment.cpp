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

#include "qst/experiment.hpp"

namespace qst {

namespace {

using io::json;

std::uint64_t count(const json& j, const std::string& what) {
  if (!j.is_number_unsigned()) throw ParseError(what + ": expected a non-negative integer");
  return j.get<std::uint64_t>();
}

std::string text(const json& j, const std::string& what) {
  if (!j.is_string()) throw ParseError(what + ": expected a string");
  return j.get<std::string>();
}

StateSpec parse_state(const json& j) {
  io::require_known_keys(j, {"sites", "phys_dim", "structure", "matrix_file"}, "state");
  StateSpec s;
  if (j.contains("matrix_file")) {
    s.matrix_file = text(j["matrix_file"], "state.matrix_file");
    if (j.contains("structure")) throw ParseError("state: give either structure or matrix_file, not both");
  }
  if (j.contains("sites")) s.sites = count(j["sites"], "state.sites");
  if (j.contains("phys_dim")) s.phys_dim = count(j["phys_dim"], "state.phys_dim");
  if (j.contains("structure")) s.structure = io::structure_from_json(j["structure"]);
  if (s.sites < 1) throw ParseError("state.sites must be at least 1");
  if (s.phys_dim < 2) throw ParseError("state.phys_dim must be at least 2");
  if (s.structure.kind == StructureKind::mpo) s.structure.phys_dim = s.phys_dim;
  return s;
}

EnsembleSpec parse_ensemble(const json& j) {
  io::require_known_keys(j, {"scheme", "sites", "settings", "vectors_file"}, "ensemble");
  EnsembleSpec e;
  if (!j.contains("scheme")) throw ParseError("ensemble: missing \"scheme\"");
  e.scheme = text(j["scheme"], "ensemble.scheme");
  static const char* known[] = {"computational", "sic", "design3", "pauli_basis", "haar", "local_haar", "vectors"};
  bool ok = false;
  for (const char* k : known) ok = ok || e.scheme == k;
  if (!ok) throw ParseError("ensemble.scheme: unknown scheme '" + e.scheme + "'");
  if (j.contains("sites")) e.sites = count(j["sites"], "ensemble.sites");
  if (j.contains("settings")) e.settings = count(j["settings"], "ensemble.settings");
  if (j.contains("vectors_file")) e.vectors_file = text(j["vectors_file"], "ensemble.vectors_file");
  if (e.scheme == "vectors" && e.vectors_file.empty()) throw ParseError("ensemble: scheme 'vectors' needs vectors_file");
  if (e.sites < 1) throw ParseError("ensemble.sites must be at least 1");
  if (e.settings < 1) throw ParseError("ensemble.settings must be at least 1");
  return e;
}

}  // namespace

Eigen::Index StateSpec::dim() const {
  Eigen::Index d = 1;
  for (std::size_t i = 0; i < sites; ++i) d *= static_cast<Eigen::Index>(phys_dim);
  return d;
}

ExperimentSpec parse_experiment(const io::json& j) {
  io::require_known_keys(j, {"version", "name", "seed", "state", "ensemble", "shots", "estimator", "output"},
                         "experiment");
  if (!j.contains("version")) throw ParseError("experiment: missing \"version\"");
  if (!j["version"].is_number_integer() || j["version"].get<long long>() != 1) {
    throw ParseError("experiment: unsupported version (expected 1)");
  }
  if (!j.contains("seed")) throw ParseError("experiment: missing \"seed\"");
  ExperimentSpec s;
  s.seed = count(j["seed"], "experiment.seed");
  if (j.contains("name")) s.name = text(j["name"], "experiment.name");
  if (!j.contains("state")) throw ParseError("experiment: missing \"state\"");
  s.state = parse_state(j["state"]);
  if (!j.contains("ensemble")) throw ParseError("experiment: missing \"ensemble\"");
  s.ensemble = parse_ensemble(j["ensemble"]);
  if (j.contains("shots")) s.shots = count(j["shots"], "experiment.shots");
  if (s.shots < 1) throw ParseError("experiment.shots must be at least 1");
  if (!j.contains("estimator")) throw ParseError("experiment: missing \"estimator\"");
  s.estimator = io::estimator_from_json(j["estimator"]);
  if (j.contains("output")) s.output = text(j["output"], "experiment.output");

  if (s.state.matrix_file.empty()) {
    try {
      s.state.structure.validate(s.state.dim());
    } catch (const InvalidArgument& e) {
      throw ParseError(std::string("state.structure: ") + e.what());
    }
  }
  if (s.ensemble.scheme != "vectors" && s.state.phys_dim != 2) {
    throw ParseError("ensemble: built-in schemes act on qubits; state.phys_dim must be 2");
  }
  if (s.ensemble.scheme != "vectors" && s.ensemble.sites != s.state.sites) {
    throw ParseError("ensemble.sites must equal state.sites");
  }
  return s;
}

ExperimentSpec parse_experiment(const std::string& text) {
  io::json j;
  try {
    j = io::json::parse(text);
  } catch (const io::json::parse_error& e) {
    throw ParseError(e.what());
  }
  return parse_experiment(j);
}

io::json experiment_to_json(const ExperimentSpec& spec) {
  io::json state;
  if (!spec.state.matrix_file.empty()) {
    state = {{"matrix_file", spec.state.matrix_file.generic_string()}};
  } else {
    state = {{"sites", spec.state.sites}, {"phys_dim", spec.state.phys_dim},
             {"structure", io::structure_to_json(spec.state.structure)}};
  }
  state["sites"] = spec.state.sites;
  state["phys_dim"] = spec.state.phys_dim;
  io::json ensemble{{"scheme", spec.ensemble.scheme},
                    {"sites", spec.ensemble.sites},
                    {"settings", spec.ensemble.settings}};
  if (!spec.ensemble.vectors_file.empty()) ensemble["vectors_file"] = spec.ensemble.vectors_file.generic_string();
  return io::json{{"version", 1},
                  {"name", spec.name},
                  {"seed", spec.seed},
                  {"state", state},
                  {"ensemble", ensemble},
                  {"shots", spec.shots},
                  {"estimator", io::estimator_to_json(spec.estimator)},
                  {"output", spec.output.generic_string()}};
}

ExperimentSpec load_experiment(const std::filesystem::path& path) {
  ExperimentSpec spec = parse_experiment(io::read_text(path));
  const auto base = path.parent_path();
  auto resolve = [&](std::filesystem::path& p) {
    if (!p.empty() && p.is_relative()) p = base / p;
  };
  resolve(spec.state.matrix_file);
  resolve(spec.ensemble.vectors_file);
  return spec;
}

DensityMatrix make_truth(const ExperimentSpec& spec) {
  if (!spec.state.matrix_file.empty()) {
    const ComplexMatrix m = io::matrix_from_json(io::read_json(spec.state.matrix_file));
    return validate_density(m);
  }
  return random_structured_state(spec.state.structure, spec.state.dim(), derive_seed(spec.seed, seed_state));
}

PovmEnsemble make_ensemble(const ExperimentSpec& spec) {
  return build_ensemble(spec.ensemble, derive_seed(spec.seed, seed_ensemble));
}

}  // namespace qst
