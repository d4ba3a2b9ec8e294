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

#include "uniped/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <cstdio>
#include <filesystem>
#include <memory>

#include "uniped/control/jump_tracker.hpp"
#include "uniped/control/tiptoe.hpp"
#include "uniped/errors.hpp"
#include "uniped/io/report.hpp"
#include "uniped/io/rollout_csv.hpp"
#include "uniped/io/trajectory_csv.hpp"
#include "uniped/robot_model.hpp"
#include "uniped/sim/simulator.hpp"
#include "uniped/trajopt/solver.hpp"
#include "uniped/trajopt/validator.hpp"

namespace uniped::cli {
namespace {

namespace fs = std::filesystem;

RobotModel load_model(const RunConfig& config) {
  ConfigNode root = config.model_path.empty()
                        ? parse_config_text(default_model_config_text(),
                                            "<built-in default model>")
                        : parse_config_file(config.model_path);
  for (auto& c : root.children) {
    if (c.key != "model") continue;
    bool patched = false;
    for (auto& mc : c.children) {
      if (mc.key == "payload_kg") {
        mc.value = std::to_string(config.payload_kg);
        patched = true;
      }
    }
    if (!patched) {
      ConfigNode extra;
      extra.key = "payload_kg";
      extra.value = std::to_string(config.payload_kg);
      extra.file = c.file;
      c.children.push_back(extra);
    }
  }
  return load_robot_model(root);
}

std::string out_path(const RunConfig& config, const std::string& name) {
  fs::create_directories(config.out_dir);
  return (fs::path(config.out_dir) / name).string();
}

control::ImpedanceGains pick_gains(const RunConfig& config,
                                   const RobotModel& model, bool for_jump) {
  control::ImpedanceGains g =
      for_jump ? control::jump_gains(model) : control::tiptoe_gains(model);
  if (config.gains_profile == "default") return g;
  if (config.gains_profile == "zero") {
    g.kp.setZero();
    g.kd.setZero();
    return g;
  }
  if (config.gains_profile == "stiff") {
    g.kp *= 2.0;
    g.kd *= 2.0;
    return g;
  }
  throw ConfigError("unknown gains profile '" + config.gains_profile +
                    "' (default, zero, stiff)");
}

double pitch_from_rotation(const Eigen::Matrix3d& R) {
  return std::atan2(R(0, 2), R(0, 0));
}

control::TrackedTrajectory tracked_from_file(const RobotModel& model,
                                             const io::TrajectoryFileData& data) {
  const int N = data.vars.layout.N;
  const int n = data.vars.layout.n;
  const int nc = data.vars.layout.nc;
  if (n != model.joint_count() || nc != model.contact_count()) {
    throw ConfigError("trajectory file does not match the model layout");
  }
  control::TrackedTrajectory traj;
  traj.dt = data.dt;
  traj.start_base = data.vars.p(0);
  traj.q.resize(n, N);
  traj.qd.resize(n, N);
  traj.tau_ff.resize(n, N);
  int liftoff = N;
  for (int k = 0; k < N; ++k) {
    if (data.contact_active.row(k).sum() == 0) {
      liftoff = k;
      break;
    }
  }
  traj.liftoff_time = liftoff * data.dt;
  for (int k = 0; k < N; ++k) {
    traj.q.col(k) = data.vars.q(k);
    std::vector<Eigen::Vector3d> fs(nc);
    for (int i = 0; i < nc; ++i) fs[i] = data.vars.f(k, i);
    traj.tau_ff.col(k) =
        trajopt::torque_estimate(model, data.vars.q(k), data.vars.R(k), fs);
  }
  for (int k = 0; k < N; ++k) {
    if (k == 0) {
      traj.qd.col(k) = (traj.q.col(1) - traj.q.col(0)) / data.dt;
    } else if (k == N - 1) {
      traj.qd.col(k) = (traj.q.col(k) - traj.q.col(k - 1)) / data.dt;
    } else {
      traj.qd.col(k) = (traj.q.col(k + 1) - traj.q.col(k - 1)) / (2 * data.dt);
    }
  }
  return traj;
}

nlohmann::json phases_json(const std::vector<sim::Phase>& phases) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : phases) {
    arr.push_back({{"kind", p.kind == sim::Phase::kFlight ? "flight" : "stance"},
                   {"t_start", p.t_start},
                   {"t_end", p.t_end}});
  }
  return arr;
}

}  // namespace

int cmd_optimize(const RunConfig& config) {
  const RobotModel model = load_model(config);
  const trajopt::JumpProblem problem = trajopt::make_default_jump_problem(
      model, config.apex, config.stance_duration, config.dt, config.mu);
  const trajopt::ContactSchedule& schedule = problem.schedule;

  trajopt::SolverConfig sc;
  sc.seed = config.seed;
  sc.verbose = config.verbose;
  const trajopt::JumpSolution solution = trajopt::solve(problem, sc);
  const trajopt::ViolationReport violations =
      trajopt::validate_solution(problem, solution.vars);

  io::write_trajectory_csv(out_path(config, "trajectory.csv"), schedule,
                           solution.vars);

  double planned_apex = -1e30;
  for (int k = 0; k < schedule.knot_count(); ++k) {
    planned_apex = std::max(planned_apex, solution.vars.p(k).z());
  }
  nlohmann::json report = {
      {"solver", io::to_json(solution.report)},
      {"violations", io::to_json(violations)},
      {"scenario",
       {{"apex_target_rise", config.apex},
        {"apex_target_z", problem.apex_target_z},
        {"planned_apex_z", planned_apex},
        {"planned_apex_rise", planned_apex - model.standing_base_height},
        {"standing_base_height", model.standing_base_height},
        {"liftoff_knot", problem.liftoff_knot},
        {"stance_duration", config.stance_duration},
        {"dt", config.dt},
        {"mu", config.mu},
        {"payload_kg", config.payload_kg},
        {"seed", config.seed}}}};
  io::write_json_atomic(out_path(config, "report.json"), report);

  std::printf("optimize: %s, max violation %.3e, knee torque peak %.2f N m\n",
              solution.report.message.c_str(), violations.max_violation,
              violations.knee_torque_peak);
  return solution.report.status == trajopt::SolveStatus::kFailed
             ? kExitNumerical
             : kExitOk;
}

int cmd_track(const RunConfig& config) {
  const RobotModel model = load_model(config);
  if (config.trajectory_path.empty()) {
    throw ConfigError("track requires --trajectory");
  }
  const io::TrajectoryFileData data =
      io::read_trajectory_csv(config.trajectory_path);
  const control::TrackedTrajectory traj = tracked_from_file(model, data);
  const control::ImpedanceGains gains = pick_gains(config, model, true);

  auto dynamics = std::make_shared<sim::PlanarDynamics>(model);
  sim::RolloutOptions opts;
  opts.actuation.battery_resistance = config.battery_resistance;
  opts.keep_partial_log = true;
  sim::SimState initial = sim::make_standing_state(
      *dynamics, data.vars.q(0), data.vars.p(0).z(), opts.contact);
  initial.coords(0) = data.vars.p(0).x();
  initial.coords(2) = pitch_from_rotation(data.vars.R(0));
  const double duration = traj.duration() + 0.4;
  const sim::RolloutLog log =
      sim::rollout(initial, control::jump_tracker(traj, gains), duration,
                   *dynamics, opts);
  io::write_rollout_csv(out_path(config, "rollout.csv"), log);

  const auto phases = sim::detect_phases(log);
  double liftoff = -1.0, flight_time = 0.0, apex_z = -1e30;
  for (const auto& p : phases) {
    if (p.kind == sim::Phase::kFlight && p.t_start > 0.0 && liftoff < 0.0) {
      liftoff = p.t_start;
      flight_time = p.t_end - p.t_start;
    }
  }
  for (int row = 0; row < log.size(); ++row) {
    apex_z = std::max(apex_z, log.coords[row](1));
  }
  double planned_apex = -1e30;
  for (int k = 0; k < data.vars.layout.N; ++k) {
    planned_apex = std::max(planned_apex, data.vars.p(k).z());
  }

  nlohmann::json report = {
      {"phases", phases_json(phases)},
      {"planned",
       {{"liftoff_time", traj.liftoff_time},
        {"apex_z", planned_apex},
        {"apex_rise", planned_apex - model.standing_base_height}}},
      {"tracked",
       {{"liftoff_time", liftoff},
        {"flight_duration", flight_time},
        {"apex_z", apex_z},
        {"apex_rise", apex_z - model.standing_base_height}}},
      {"aborted", log.aborted},
      {"abort_message", log.abort_message},
      {"bus",
       {{"v_min", log.size()
                      ? *std::min_element(log.v_bus.begin(), log.v_bus.end())
                      : 0.0},
        {"battery_resistance", config.battery_resistance}}}};
  io::write_json_atomic(out_path(config, "track_report.json"), report);

  std::printf("track: liftoff %.3f s, flight %.3f s, apex rise %.3f m\n",
              liftoff, flight_time, apex_z - model.standing_base_height);
  return log.aborted ? kExitNumerical : kExitOk;
}

int cmd_tiptoe(const RunConfig& config) {
  const RobotModel model = load_model(config);
  control::TiptoeTimings timings;
  timings.balance_duration = config.tiptoe_duration;
  const control::PhasePlan plan = control::tiptoe_plan(model, timings);
  const control::ImpedanceGains gains = pick_gains(config, model, false);

  auto dynamics = std::make_shared<sim::PlanarDynamics>(model);
  sim::RolloutOptions opts;
  opts.actuation.battery_resistance = config.battery_resistance;
  opts.keep_partial_log = true;
  const sim::SimState initial = sim::make_standing_state(
      *dynamics, plan.start_pose, plan.start_base_height, opts.contact);
  if (config.knee_backlash_deg > 0.0) {
    // Actuator-side degrees scale through the knee belt onto the joint.
    int knee = 1;
    for (int j = 0; j < model.joint_count(); ++j) {
      if (model.joints[j].name == "knee") knee = j;
    }
    const auto& knee_entry = model.drivetrain.entry(knee, knee);
    opts.knee_backlash_width = config.knee_backlash_deg * knee_entry.constant *
                               std::numbers::pi / 180.0;
  }

  const sim::RolloutLog log =
      sim::rollout(initial, control::make_tiptoe_controller(dynamics, plan, gains),
                   plan.duration(), *dynamics, opts);
  io::write_rollout_csv(out_path(config, "rollout.csv"), log);

  // Balance metrics after heel release.
  const double release_t = plan.phases.back().t_start;
  double max_pitch = 0.0, min_margin = 1e30;
  nlohmann::json series = nlohmann::json::array();
  const int stride = std::max(1, log.size() / 2000);
  std::vector<int> toe_ids;
  for (const auto& c : model.contacts) {
    if (c.group == ContactGroup::kToe) toe_ids.push_back(c.id);
  }
  for (int row = 0; row < log.size(); ++row) {
    const double t = log.t[row];
    if (t < release_t) continue;
    const double pitch = log.coords[row](2);
    const auto kin = dynamics->contact_kinematics(log.coords[row],
                                                  log.vel[row]);
    double toe_min = 1e30, toe_max = -1e30;
    for (int i : toe_ids) {
      toe_min = std::min(toe_min, kin[i].pos.x());
      toe_max = std::max(toe_max, kin[i].pos.x());
    }
    const double com_x = dynamics->com(log.coords[row]).x();
    const double margin = std::min(com_x - toe_min, toe_max - com_x);
    max_pitch = std::max(max_pitch, std::abs(pitch));
    min_margin = std::min(min_margin, margin);
    if (row % stride == 0) {
      series.push_back({{"t", t},
                        {"pitch_deg", pitch * 180.0 / std::numbers::pi},
                        {"com_margin", margin}});
    }
  }
  const bool balanced = !log.aborted && max_pitch * 180.0 / std::numbers::pi <= 5.0 &&
                        min_margin >= 0.0 &&
                        log.size() > 0 &&
                        log.t.back() >= plan.duration() - 2e-3;

  nlohmann::json report = {
      {"heel_release_time", release_t},
      {"max_pitch_deg", max_pitch * 180.0 / std::numbers::pi},
      {"min_com_margin", min_margin == 1e30 ? 0.0 : min_margin},
      {"balanced", balanced},
      {"knee_backlash_deg", config.knee_backlash_deg},
      {"plan_warning", plan.warning},
      {"aborted", log.aborted},
      {"abort_message", log.abort_message},
      {"series", series}};
  io::write_json_atomic(out_path(config, "balance_report.json"), report);

  std::printf("tiptoe: %s, max pitch %.2f deg, min CoM margin %.4f m\n",
              balanced ? "balanced" : "NOT balanced", max_pitch * 180.0 / std::numbers::pi,
              min_margin == 1e30 ? 0.0 : min_margin);
  return balanced ? kExitOk : kExitNumerical;
}

int cmd_identify(const RunConfig& config) {
  if (config.dyno_path.empty()) throw ConfigError("identify requires --dyno");
  const auto samples = load_dyno_csv(config.dyno_path);
  if (samples.size() < 3) {
    throw ConfigError("identify: need at least 3 dyno samples, got " +
                      std::to_string(samples.size()));
  }
  const TorqueConstantFit fit = fit_torque_constant(samples);
  std::printf("Kt = %.6f N m / A\nr^2 = %.6f\nsamples = %d\n", fit.Kt,
              fit.r_squared, fit.sample_count);
  io::write_json_atomic(out_path(config, "identify.json"),
                        {{"Kt", fit.Kt},
                         {"r_squared", fit.r_squared},
                         {"samples", fit.sample_count}});
  return kExitOk;
}

int cmd_simulate(const RunConfig& config) {
  const RobotModel model = load_model(config);
  auto dynamics = std::make_shared<sim::PlanarDynamics>(model);
  const Eigen::VectorXd q = model.pose("standing");
  sim::SimState initial = sim::make_standing_state(
      *dynamics, q, model.standing_base_height + config.drop_height);

  sim::RolloutOptions opts;
  opts.actuation.enabled = false;
  const int n = model.joint_count();
  const sim::RolloutLog log = sim::rollout(
      initial, [n](const sim::SimState&) { return Eigen::VectorXd::Zero(n); },
      config.duration, *dynamics, opts);
  io::write_rollout_csv(out_path(config, "rollout.csv"), log);
  io::write_json_atomic(out_path(config, "phases.json"),
                        {{"phases", phases_json(sim::detect_phases(log))}});
  std::printf("simulate: %d steps, final base z %.4f m\n", log.size(),
              log.coords.back()(1));
  return kExitOk;
}

int cmd_validate(const RunConfig& config) {
  const RobotModel model = load_model(config);
  if (config.trajectory_path.empty()) {
    throw ConfigError("validate requires --trajectory");
  }
  const io::TrajectoryFileData data =
      io::read_trajectory_csv(config.trajectory_path);
  if (data.vars.layout.n != model.joint_count() ||
      data.vars.layout.nc != model.contact_count()) {
    throw ConfigError("trajectory file does not match the model layout");
  }

  trajopt::JumpProblem problem;
  problem.model = model;
  problem.schedule.c = data.contact_active;
  problem.schedule.dt = data.dt;
  problem.mu = config.mu;
  problem.weights = trajopt::default_weights();
  problem.desired.resize(data.vars.layout.N);
  for (int k = 0; k < data.vars.layout.N; ++k) {
    problem.desired[k].p_des = data.vars.p(k);
    problem.desired[k].R_des = data.vars.R(k);
    problem.desired[k].v_des = data.vars.v(k);
    problem.desired[k].omega_des = data.vars.w(k);
  }
  problem.start_q = data.vars.q(0);
  problem.liftoff_knot = problem.schedule.first_flight_knot();

  const trajopt::ViolationReport report =
      trajopt::validate_solution(problem, data.vars);
  io::write_json_atomic(out_path(config, "violation_report.json"),
                        io::to_json(report));
  std::printf("validate: max violation %.3e, knee torque peak %.2f N m\n",
              report.max_violation, report.knee_torque_peak);
  return report.max_violation <= 1e-4 ? kExitOk : kExitNumerical;
}

int run_command(const std::string& subcommand, const RunConfig& config) {
  try {
    if (subcommand == "optimize") return cmd_optimize(config);
    if (subcommand == "track") return cmd_track(config);
    if (subcommand == "tiptoe") return cmd_tiptoe(config);
    if (subcommand == "identify") return cmd_identify(config);
    if (subcommand == "simulate") return cmd_simulate(config);
    if (subcommand == "validate") return cmd_validate(config);
    std::fprintf(stderr, "unknown subcommand '%s'\n", subcommand.c_str());
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return kExitNumerical;
  }
}

}  // namespace uniped::cli
