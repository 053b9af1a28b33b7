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

// Scenario runner. Exit status: 0 pass, 1 assertion failure, 2 validation
// failure, 3 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qbh/scenario.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kAssertion = 1;
constexpr int kValidation = 2;
constexpr int kNumerical = 3;

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw qbh::ValidationError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int replay(const qbh::ScenarioConfig& cfg, const std::string& path) {
  const auto old = qbh::parse_result(read_file(path));
  auto it = old.find("schema_version");
  if (it == old.end() || it->second != qbh::report_schema_version()) {
    std::cerr << "replay: schema version mismatch (file "
              << (it == old.end() ? std::string("<missing>") : it->second) << ", tool "
              << qbh::report_schema_version() << ")\n";
    return kValidation;
  }
  const qbh::ScenarioResult fresh = qbh::run_scenario(cfg);
  if (qbh::render_result(fresh) != read_file(path)) {
    std::cerr << "replay: result differs from " << path << "\n";
    return kAssertion;
  }
  std::cout << "replay: identical\n";
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadratic bosonic systems: particle-hole duality scenarios"};
  std::string config_path;
  std::string out_dir;
  long cutoff = 0;
  double tol = 0.0;
  bool list = false;
  std::string replay_path;
  app.add_option("--config", config_path, "JSON scenario configuration");
  app.add_option("--out-dir", out_dir, "output directory (overridden by QBH_OUT_DIR)");
  app.add_option("--cutoff", cutoff, "Fock cutoff override")->check(CLI::PositiveNumber);
  app.add_option("--tol", tol, "tolerance override")->check(CLI::PositiveNumber);
  app.add_flag("--list-scenarios", list, "print scenario names and exit");
  app.add_option("--replay", replay_path, "re-run and compare against an existing result.kv");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kValidation;
  }

  if (list) {
    for (const auto& s : qbh::scenario_names()) std::cout << s << '\n';
    return kPass;
  }
  try {
    if (config_path.empty()) throw qbh::ValidationError("--config is required");
    qbh::ScenarioConfig cfg = qbh::parse_config(read_file(config_path));
    if (cutoff > 0) cfg.cutoff = cutoff;
    if (tol > 0.0) cfg.tol = tol;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (const char* env = std::getenv("QBH_OUT_DIR"); env && *env) cfg.out_dir = env;

    if (!replay_path.empty()) return replay(cfg, replay_path);

    const qbh::ScenarioResult r = qbh::run_scenario(cfg);
    qbh::write_outputs(r, cfg.out_dir);
    std::cout << qbh::render_result(r);
    return r.passed ? kPass : kAssertion;
  } catch (const qbh::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const qbh::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  }
}
