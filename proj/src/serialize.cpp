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

#include "qst/serialize.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace qst::io {

namespace {

double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ParseError(what + ": expected a number");
  return j.get<double>();
}

std::uint64_t count(const json& j, const std::string& what) {
  if (!j.is_number_unsigned()) throw ParseError(what + ": expected a non-negative integer");
  return j.get<std::uint64_t>();
}

const json& field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing \"" + key + "\"");
  return *it;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

void require_known_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  std::set<std::string> names(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!names.count(it.key())) throw ParseError(where + ": unknown key \"" + it.key() + "\"");
  }
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix: expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) throw ParseError("matrix: rows must be non-empty arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw ParseError("matrix: ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& e = row[static_cast<std::size_t>(c)];
      if (!e.is_array() || e.size() != 2) throw ParseError("matrix: entries must be [re, im] pairs");
      m(r, c) = cplx(number(e[0], "matrix entry"), number(e[1], "matrix entry"));
    }
  }
  return m;
}

json record_to_json(const MeasurementRecord& rec) {
  return json{{"setting", rec.setting_index}, {"shots", rec.shots}, {"counts", rec.counts}};
}

MeasurementRecord record_from_json(const json& j) {
  require_known_keys(j, {"setting", "shots", "counts"}, "record");
  MeasurementRecord rec;
  rec.setting_index = count(field(j, "setting", "record"), "record.setting");
  rec.shots = count(field(j, "shots", "record"), "record.shots");
  const json& counts = field(j, "counts", "record");
  if (!counts.is_array()) throw ParseError("record.counts: expected an array");
  std::uint64_t total = 0;
  for (const auto& c : counts) {
    rec.counts.push_back(count(c, "record.counts"));
    total += rec.counts.back();
  }
  if (total != rec.shots) throw ParseError("record: counts do not sum to shots");
  return rec;
}

json records_to_json(const std::vector<MeasurementRecord>& records) {
  json arr = json::array();
  for (const auto& r : records) arr.push_back(record_to_json(r));
  return json{{"records", arr}};
}

std::vector<MeasurementRecord> records_from_json(const json& j) {
  require_known_keys(j, {"records"}, "records file");
  const json& arr = field(j, "records", "records file");
  if (!arr.is_array()) throw ParseError("records: expected an array");
  std::vector<MeasurementRecord> out;
  for (const auto& r : arr) out.push_back(record_from_json(r));
  return out;
}

json mpo_to_json(const MpoState& m) {
  json cores = json::array();
  for (const auto& site : m.cores) {
    json s = json::array();
    for (const auto& c : site) s.push_back(matrix_to_json(c));
    cores.push_back(std::move(s));
  }
  return json{{"sites", m.sites}, {"phys_dim", m.phys_dim}, {"bond_dims", m.bond_dims}, {"cores", cores}};
}

MpoState mpo_from_json(const json& j) {
  require_known_keys(j, {"sites", "phys_dim", "bond_dims", "cores"}, "mpo");
  MpoState m;
  m.sites = count(field(j, "sites", "mpo"), "mpo.sites");
  m.phys_dim = count(field(j, "phys_dim", "mpo"), "mpo.phys_dim");
  for (const auto& b : field(j, "bond_dims", "mpo")) m.bond_dims.push_back(count(b, "mpo.bond_dims"));
  const json& cores = field(j, "cores", "mpo");
  if (!cores.is_array()) throw ParseError("mpo.cores: expected an array");
  for (const auto& site : cores) {
    if (!site.is_array()) throw ParseError("mpo.cores: expected arrays of matrices");
    std::vector<ComplexMatrix> s;
    for (const auto& c : site) s.push_back(matrix_from_json(c));
    m.cores.push_back(std::move(s));
  }
  return m;
}

json structure_to_json(const StructureModel& s) {
  json j{{"kind", to_string(s.kind)}};
  if (s.kind == StructureKind::low_rank) j["rank"] = s.rank;
  if (s.kind == StructureKind::mpo) {
    j["bonds"] = s.bonds;
    j["phys_dim"] = s.phys_dim;
  }
  return j;
}

StructureModel structure_from_json(const json& j) {
  require_known_keys(j, {"kind", "rank", "bonds", "phys_dim"}, "structure");
  const json& kind = field(j, "kind", "structure");
  if (!kind.is_string()) throw ParseError("structure.kind: expected a string");
  StructureModel s;
  try {
    s.kind = parse_structure_kind(kind.get<std::string>());
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("structure.kind: ") + e.what());
  }
  switch (s.kind) {
    case StructureKind::full:
      if (j.contains("rank") || j.contains("bonds")) throw ParseError("structure: full takes no rank or bonds");
      break;
    case StructureKind::low_rank:
      s.rank = count(field(j, "rank", "structure"), "structure.rank");
      if (s.rank < 1) throw ParseError("structure.rank must be at least 1");
      if (j.contains("bonds")) throw ParseError("structure: low_rank takes no bonds");
      break;
    case StructureKind::mpo: {
      const json& bonds = field(j, "bonds", "structure");
      if (!bonds.is_array() || bonds.empty()) throw ParseError("structure.bonds: expected a non-empty array");
      for (const auto& b : bonds) s.bonds.push_back(count(b, "structure.bonds"));
      if (j.contains("phys_dim")) s.phys_dim = count(j["phys_dim"], "structure.phys_dim");
      if (j.contains("rank")) throw ParseError("structure: mpo takes no rank");
      break;
    }
  }
  return s;
}

json estimator_to_json(const EstimatorConfig& cfg) {
  json j{{"method", to_string(cfg.method)},
         {"structure", structure_to_json(cfg.structure)},
         {"max_iters", cfg.max_iters},
         {"stop_tol", cfg.stop_tol},
         {"mom_batches", cfg.mom_batches}};
  if (cfg.step_size) j["step_size"] = *cfg.step_size;
  return j;
}

EstimatorConfig estimator_from_json(const json& j) {
  require_known_keys(j, {"method", "structure", "step_size", "max_iters", "stop_tol", "mom_batches"}, "estimator");
  EstimatorConfig cfg;
  const json& method = field(j, "method", "estimator");
  if (!method.is_string()) throw ParseError("estimator.method: expected a string");
  try {
    cfg.method = parse_method(method.get<std::string>());
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("estimator.method: ") + e.what());
  }
  if (j.contains("structure")) cfg.structure = structure_from_json(j["structure"]);
  if (j.contains("step_size")) cfg.step_size = number(j["step_size"], "estimator.step_size");
  if (j.contains("max_iters")) cfg.max_iters = count(j["max_iters"], "estimator.max_iters");
  if (j.contains("stop_tol")) cfg.stop_tol = number(j["stop_tol"], "estimator.stop_tol");
  if (j.contains("mom_batches")) cfg.mom_batches = count(j["mom_batches"], "estimator.mom_batches");
  try {
    cfg.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
  return cfg;
}

json estimate_to_json(const EstimateResult& r, const std::optional<double>& final_error) {
  json j{{"method", r.method}, {"iterations", r.iterations}};
  if (final_error) j["final_error"] = *final_error;
  json res = json::array();
  for (double v : r.residuals) res.push_back(finite_or_null(v));
  j["residuals"] = std::move(res);
  j["state"] = matrix_to_json(r.state.matrix());
  return j;
}

json to_json(const IsometryReport& r) {
  return json{{"lhs", r.lhs}, {"rhs", r.rhs}, {"abs_deviation", r.abs_deviation}};
}

json to_json(const HaarExpectation& r) {
  return json{{"mc_estimate", r.mc_estimate}, {"predicted", r.predicted}};
}

json to_json(const RipReport& r) {
  return json{{"ratios", r.ratios}, {"empirical_delta", r.empirical_delta}};
}

json to_json(const KlReport& r) {
  return json{{"kl", finite_or_null(r.kl)},     {"l2_approx", r.l2_approx},
              {"gap", finite_or_null(r.gap)},   {"fisher_approx", r.fisher_approx},
              {"fisher_gap", finite_or_null(r.fisher_gap)}, {"finite", r.finite}};
}

json to_json(const BudgetReport& r) {
  return json{{"class", r.tag},
              {"log_covering", r.log_covering},
              {"gamma", r.gamma},
              {"recommended_shots", r.recommended_shots},
              {"advisory", r.advisory}};
}

json to_json(const ScalingReport& r) {
  json medians = json::array();
  for (double m : r.median_errors) medians.push_back(finite_or_null(m));
  json j{{"grid", r.grid}, {"median_errors", medians}, {"at_floor", r.at_floor}, {"failures", r.failures}};
  j["slope"] = r.slope ? json(*r.slope) : json(nullptr);
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string scaling_csv_header() { return "trial,param_value,frob_error,trace_error,fidelity,wall_ms"; }

std::string scaling_csv_row(const ScalingTrial& t, double param_value) {
  std::ostringstream os;
  os << t.trial << ',' << format_double(param_value) << ',';
  if (t.failed) {
    os << "nan,nan,nan,";
  } else {
    os << format_double(t.frob_error) << ',' << format_double(t.trace_error) << ',' << format_double(t.fidelity) << ',';
  }
  os << format_double(t.wall_ms);
  return os.str();
}

}  // namespace qst::io
