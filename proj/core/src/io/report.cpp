// Copyright 2026 The uniped Authors
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

#include "uniped/io/report.hpp"

#include <fstream>

#include "uniped/errors.hpp"
#include "uniped/io/trajectory_csv.hpp"

namespace uniped::io {

nlohmann::json to_json(const trajopt::ViolationReport& report) {
  nlohmann::json blocks = nlohmann::json::object();
  for (const auto& b : report.blocks) {
    blocks[b.name] = {{"max", b.max_abs},
                      {"mean", b.mean_abs},
                      {"argmax_knot", b.argmax_knot},
                      {"argmax_contact", b.argmax_contact}};
  }
  return {{"blocks", blocks},
          {"max_violation", report.max_violation},
          {"knee_torque_peak", report.knee_torque_peak},
          {"knee_torque_peak_knot", report.knee_torque_peak_knot},
          {"cost", report.cost}};
}

nlohmann::json to_json(const trajopt::SolverReport& report) {
  const char* status = "failed";
  if (report.status == trajopt::SolveStatus::kConverged) status = "converged";
  if (report.status == trajopt::SolveStatus::kIterationCap) {
    status = "iteration_cap";
  }
  return {{"status", status},
          {"outer_iterations", report.outer_iterations},
          {"inner_iterations", report.inner_iterations},
          {"final_cost", report.final_cost},
          {"final_merit", report.final_merit},
          {"gradient_norm", report.gradient_norm},
          {"max_violation", report.max_violation},
          {"message", report.message}};
}

void write_json_atomic(const std::string& path, const nlohmann::json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open report file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return j;
}

}  // namespace uniped::io
