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
#include <string>
#include <vector>

#include <json.hpp>

#include "qst/estimators.hpp"
#include "qst/sampler.hpp"
#include "qst/structures.hpp"
#include "qst/verify.hpp"

namespace qst::io {

using json = nlohmann::json;

/// Nested row-major array of [re, im] pairs.
json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

json record_to_json(const MeasurementRecord& rec);
MeasurementRecord record_from_json(const json& j);

json records_to_json(const std::vector<MeasurementRecord>& records);
std::vector<MeasurementRecord> records_from_json(const json& j);

json mpo_to_json(const MpoState& m);
MpoState mpo_from_json(const json& j);

json structure_to_json(const StructureModel& s);
StructureModel structure_from_json(const json& j);

json estimator_to_json(const EstimatorConfig& cfg);
EstimatorConfig estimator_from_json(const json& j);

/// {method, iterations, final_error?, residuals, state}; wall-clock omitted.
json estimate_to_json(const EstimateResult& r, const std::optional<double>& final_error);

json to_json(const IsometryReport& r);
json to_json(const HaarExpectation& r);
json to_json(const RipReport& r);
json to_json(const KlReport& r);
json to_json(const BudgetReport& r);
json to_json(const ScalingReport& r);

/// Pretty-printed dump with a trailing newline.
std::string dump(const json& j);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);
json read_json(const std::filesystem::path& path);

/// Shortest round-trip decimal form.
std::string format_double(double v);

/// CSV columns: trial,param_value,frob_error,trace_error,fidelity,wall_ms
std::string scaling_csv_header();
std::string scaling_csv_row(const ScalingTrial& t, double param_value);

/// Rejects keys not in `allowed` with a ParseError naming `where`.
void require_known_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where);

}  // namespace qst::io
