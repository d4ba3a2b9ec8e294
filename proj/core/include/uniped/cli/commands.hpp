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

#ifndef UNIPED_CLI_COMMANDS_HPP_
#define UNIPED_CLI_COMMANDS_HPP_

#include <cstdint>
#include <string>

namespace uniped::cli {

// Exit codes: 0 success, 1 usage/configuration error, 2 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

struct RunConfig {
  std::string model_path;  // empty = built-in default model
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  double apex = 0.30;             // m above the standing base height
  double stance_duration = 0.40;  // s
  double dt = 0.01;               // s per knot
  double mu = 0.70;
  std::string gains_profile = "default";
  double payload_kg = 1.0;

  double duration = 1.5;          // s (simulate)
  double drop_height = 0.05;      // m (simulate)
  std::string dyno_path;          // identify
  std::string trajectory_path;    // track / validate

  double battery_resistance = 0.0;     // ohm; 0 = ideal bus
  double knee_backlash_deg = 0.0;      // actuator-side degrees to inject
  double tiptoe_duration = 10.0;       // s of balance after heel release
  bool verbose = false;
};

int cmd_optimize(const RunConfig& config);
int cmd_track(const RunConfig& config);
int cmd_tiptoe(const RunConfig& config);
int cmd_identify(const RunConfig& config);
int cmd_simulate(const RunConfig& config);
int cmd_validate(const RunConfig& config);

/// Shared helper: dispatches on the subcommand name and maps exceptions to
/// the exit-code contract.
int run_command(const std::string& subcommand, const RunConfig& config);

}  // namespace uniped::cli

#endif  // UNIPED_CLI_COMMANDS_HPP_
