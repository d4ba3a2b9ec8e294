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

#include <CLI11.hpp>

#include "uniped/cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "uniped: jump trajectory optimization and simulated validation for a "
      "single-leg robot with an actuated toe and co-actuated drivetrain"};
  app.require_subcommand(1);

  uniped::cli::RunConfig cfg;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--model", cfg.model_path,
                    "Robot model config (defaults to the built-in model)");
    cmd->add_option("--out", cfg.out_dir, "Output directory");
    cmd->add_option("--seed", cfg.seed, "Deterministic run seed");
    cmd->add_option("--payload-kg", cfg.payload_kg,
                    "Torso payload mass (default 1.0)");
    cmd->add_flag("--verbose", cfg.verbose, "Verbose progress output");
  };

  CLI::App* optimize =
      app.add_subcommand("optimize", "Plan a vertical jump trajectory");
  add_common(optimize);
  optimize->add_option("--apex", cfg.apex,
                       "Apex height above standing, m (default 0.3)");
  optimize->add_option("--stance-duration", cfg.stance_duration,
                       "Stance duration, s (default 0.4)");
  optimize->add_option("--dt", cfg.dt, "Knot spacing, s (default 0.01)");
  optimize->add_option("--mu", cfg.mu, "Friction coefficient (default 0.7)");

  CLI::App* track = app.add_subcommand(
      "track", "Track a planned trajectory in the articulated simulator");
  add_common(track);
  track->add_option("--trajectory", cfg.trajectory_path, "Trajectory CSV")
      ->required();
  track->add_option("--gains-profile", cfg.gains_profile,
                    "Impedance gains: default, zero, stiff");
  track->add_option("--r-batt", cfg.battery_resistance,
                    "Battery internal resistance, ohm (default 0)");

  CLI::App* tiptoe =
      app.add_subcommand("tiptoe", "Balance on the toe after a heel release");
  add_common(tiptoe);
  tiptoe->add_option("--duration", cfg.tiptoe_duration,
                     "Balance duration after heel release, s (default 10)");
  tiptoe->add_option("--gains-profile", cfg.gains_profile,
                     "Impedance gains: default, zero, stiff");
  tiptoe->add_option("--knee-backlash", cfg.knee_backlash_deg,
                     "Injected knee backlash, actuator-side degrees");
  tiptoe->add_option("--r-batt", cfg.battery_resistance,
                     "Battery internal resistance, ohm (default 0)");

  CLI::App* identify =
      app.add_subcommand("identify", "Fit a torque constant from a dyno log");
  add_common(identify);
  identify->add_option("--dyno", cfg.dyno_path, "CSV: current_A,torque_Nm")
      ->required();

  CLI::App* simulate =
      app.add_subcommand("simulate", "Passive drop test of the model");
  add_common(simulate);
  simulate->add_option("--duration", cfg.duration, "Sim duration, s");
  simulate->add_option("--drop-height", cfg.drop_height,
                       "Initial height above standing, m");

  CLI::App* validate = app.add_subcommand(
      "validate", "Re-check a trajectory file against all constraints");
  add_common(validate);
  validate->add_option("--trajectory", cfg.trajectory_path, "Trajectory CSV")
      ->required();
  validate->add_option("--mu", cfg.mu, "Friction coefficient (default 0.7)");

  CLI11_PARSE(app, argc, argv);
  return uniped::cli::run_command(app.get_subcommands().front()->get_name(),
                                  cfg);
}
