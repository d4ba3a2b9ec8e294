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

#ifndef UNIPED_IO_REPORT_HPP_
#define UNIPED_IO_REPORT_HPP_

#include <nlohmann/json.hpp>
#include <string>

#include "uniped/trajopt/solver.hpp"
#include "uniped/trajopt/validator.hpp"

namespace uniped::io {

nlohmann::json to_json(const trajopt::ViolationReport& report);
nlohmann::json to_json(const trajopt::SolverReport& report);

/// Deterministic (sorted-key, fixed layout) JSON file write.
void write_json_atomic(const std::string& path, const nlohmann::json& j);

nlohmann::json read_json(const std::string& path);

}  // namespace uniped::io

#endif  // UNIPED_IO_REPORT_HPP_
