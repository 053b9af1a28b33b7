// Copyright 2026 The qbh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QBH_SCENARIO_HPP
#define QBH_SCENARIO_HPP

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "qbh/types.hpp"

namespace qbh {

/// Fixed version string embedded in every report.
std::string report_schema_version();

const std::vector<std::string>& scenario_names();

struct ScenarioConfig {
  std::string scenario;
  nlohmann::json parameters = nlohmann::json::object();
  Index cutoff = 0;  // 0 selects the scenario default
  double tol = 0.0;  // 0 selects the scenario default
  std::string out_dir = ".";
};

/// Parses and validates a JSON config; throws ValidationError before any computation.
ScenarioConfig parse_config(const std::string& json_text);

struct ScenarioResult {
  std::map<std::string, std::string> values;
  std::string trace_header;  // comment line describing the run, may be empty
  std::vector<std::string> trace_columns;
  std::vector<std::vector<double>> trace_rows;
  bool passed = false;
};

ScenarioResult run_scenario(const ScenarioConfig& config);

/// `key = value` lines in key order.
std::string render_result(const ScenarioResult& r);
std::string render_trace(const ScenarioResult& r);

/// Writes result.kv and, when the scenario has one, trace.csv.
void write_outputs(const ScenarioResult& r, const std::string& dir);

/// Parses `key = value` lines.
std::map<std::string, std::string> parse_result(const std::string& text);

std::string format_double(double x);

}  // namespace qbh

#endif  // QBH_SCENARIO_HPP
