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

#include "uniped/control/tiptoe.hpp"

#include <cmath>

#include "uniped/errors.hpp"

namespace uniped::control {
namespace {

double smoothstep(double a) {
  a = std::clamp(a, 0.0, 1.0);
  return a * a * (3.0 - 2.0 * a);
}

}  // namespace

const TiptoePhaseSpec& PhasePlan::phase_at(double t) const {
  for (const auto& p : phases) {
    if (t < p.t_end) return p;
  }
  return phases.back();
}

PhasePlan tiptoe_plan(const RobotModel& model, const TiptoeTimings& timings) {
  if (timings.rise_duration <= 0.0 || timings.balance_duration <= 0.0 ||
      timings.shift_duration < 0.0) {
    throw ModelError("tiptoe_plan: durations must be positive");
  }
  PhasePlan plan;
  plan.start_pose = flat_foot_pose(model, timings.start_crouch_drop);
  plan.start_base_height =
      base_height_for_ground_contact(model, plan.start_pose);
  plan.posture_target = plan.start_pose;

  // Contact indices by group.
  ContactSpec all, toe_only;
  for (const auto& c : model.contacts) {
    all.active_points.push_back(c.id);
    if (c.group == ContactGroup::kToe) toe_only.active_points.push_back(c.id);
  }
  if (toe_only.active_points.empty()) {
    throw ModelError("tiptoe_plan: model has no toe contacts");
  }

  // Target CoM position inside the toe footprint, converted into a body
  // target through the (pose-dependent, here frozen) CoM-to-base offset.
  const Eigen::Vector3d base(0, 0, plan.start_base_height);
  const auto world = forward_kinematics(model, base,
                                        Eigen::Matrix3d::Identity(),
                                        plan.start_pose);
  double toe_min = std::numeric_limits<double>::infinity();
  double toe_max = -toe_min;
  for (int i : toe_only.active_points) {
    toe_min = std::min(toe_min, world[i].x());
    toe_max = std::max(toe_max, world[i].x());
  }
  const double com_goal_x =
      toe_min + timings.com_target_fraction * (toe_max - toe_min);
  const Eigen::Vector3d com0 = com_position(
      model, base, Eigen::Matrix3d::Identity(), plan.start_pose);
  const double com_to_base = com0.x() - base.x();
  const double body_goal_x = com_goal_x - com_to_base;

  const Eigen::Vector2d body0(0.0, plan.start_base_height);
  const Eigen::Vector2d body_risen(0.0,
                                   plan.start_base_height + timings.rise_height);
  const Eigen::Vector2d body_shifted(body_goal_x, body_risen.y());

  TiptoePhaseSpec rise;
  rise.name = "rise";
  rise.t_start = 0.0;
  rise.t_end = timings.rise_duration;
  rise.contacts = all;
  rise.body_start = body0;
  rise.body_end = body_risen;

  TiptoePhaseSpec shift;
  shift.name = "shift";
  shift.t_start = rise.t_end;
  shift.t_end = rise.t_end + std::max(timings.shift_duration, 1e-6);
  shift.contacts = all;
  shift.body_start = body_risen;
  shift.body_end = body_shifted;
  if (timings.shift_duration <= 0.0 ||
      std::abs(body_goal_x - body0.x()) < 1e-9) {
    plan.warning = "degenerate shift phase (zero duration or distance)";
  }

  TiptoePhaseSpec tiptoe;
  tiptoe.name = "tiptoe";
  tiptoe.t_start = shift.t_end;
  tiptoe.t_end = shift.t_end + timings.balance_duration;
  tiptoe.contacts = toe_only;
  tiptoe.knee_task = true;
  tiptoe.body_start = body_shifted;
  tiptoe.body_end = body_shifted;

  plan.phases = {rise, shift, tiptoe};
  return plan;
}

ImpedanceGains tiptoe_gains(const RobotModel& model) {
  const int n = model.joint_count();
  ImpedanceGains g;
  g.kp = Eigen::VectorXd::Constant(n, 120.0);
  g.kd = Eigen::VectorXd::Constant(n, 4.0);
  return g;
}

sim::Controller make_tiptoe_controller(
    std::shared_ptr<sim::PlanarDynamics> dynamics, const PhasePlan& plan,
    const ImpedanceGains& gains) {
  struct State {
    std::shared_ptr<sim::PlanarDynamics> dyn;
    PhasePlan plan;
    ImpedanceGains gains;
    double knee_target = 0.0;
    bool knee_captured = false;
    Eigen::VectorXd last_torque;
  };
  auto st = std::make_shared<State>();
  st->dyn = std::move(dynamics);
  st->plan = plan;
  st->gains = gains;

  return [st](const sim::SimState& sim_state) -> Eigen::VectorXd {
    const int n = st->dyn->joint_count();
    const TiptoePhaseSpec& phase = st->plan.phase_at(sim_state.t);
    const double a = phase.t_end > phase.t_start
                         ? smoothstep((sim_state.t - phase.t_start) /
                                      (phase.t_end - phase.t_start))
                         : 1.0;
    const Eigen::Vector2d body_target =
        phase.body_start + a * (phase.body_end - phase.body_start);

    std::vector<TaskSpec> tasks;
    {
      TaskSpec orient;
      orient.kind = TaskKind::kBodyOrientation;
      orient.priority = 1;
      orient.target = Eigen::VectorXd::Constant(1, phase.pitch_target);
      orient.kp = 40.0;
      orient.kd = 10.0;
      tasks.push_back(orient);

      TaskSpec body;
      body.kind = TaskKind::kBodyPosition;
      body.priority = 2;
      body.target = body_target;
      body.kp = 30.0;
      body.kd = 8.0;
      tasks.push_back(body);

      if (phase.knee_task) {
        if (!st->knee_captured) {
          int knee = 1;
          for (int j = 0; j < n; ++j) {
            if (st->dyn->model().joints[j].name == "knee") knee = j;
          }
          st->knee_target = sim_state.coords(3 + knee);
          st->knee_captured = true;
        }
        TaskSpec knee;
        knee.kind = TaskKind::kKneeJointPosition;
        knee.priority = 3;
        knee.target = Eigen::VectorXd::Constant(1, st->knee_target);
        tasks.push_back(knee);
      }

      TaskSpec posture;
      posture.kind = TaskKind::kJointPosture;
      posture.priority = 4;
      posture.target = st->plan.posture_target;
      tasks.push_back(posture);
    }

    const WbcCommand cmd =
        wbc_solve(sim_state, *st->dyn, phase.contacts, tasks);
    if (!cmd.feasible && st->last_torque.size() == n) {
      return st->last_torque;  // hold the last feasible command
    }
    const Eigen::VectorXd tau = impedance_torque(
        cmd.q_cmd, cmd.qd_cmd, cmd.tau_ff, sim_state.coords.tail(n),
        sim_state.vel.tail(n), st->gains);
    st->last_torque = tau;
    return tau;
  };
}

}  // namespace uniped::control
