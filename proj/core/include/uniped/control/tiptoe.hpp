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

#ifndef UNIPED_CONTROL_TIPTOE_HPP_
#define UNIPED_CONTROL_TIPTOE_HPP_

#include <memory>
#include <string>
#include <vector>

#include "uniped/control/impedance.hpp"
#include "uniped/control/wbc.hpp"

namespace uniped::control {

struct TiptoeTimings {
  double rise_duration = 1.5;     // s, flat-foot rise
  double shift_duration = 2.0;    // s, CoM shift over the toe
  double balance_duration = 10.0; // s, held after heel release
  double rise_height = 0.04;      // m
  double com_target_fraction = 0.5;  // 0 = rearmost toe point, 1 = tip
  double start_crouch_drop = 0.08;   // m below standing at the start pose
};

struct TiptoePhaseSpec {
  std::string name;
  double t_start = 0.0;
  double t_end = 0.0;
  ContactSpec contacts;
  bool knee_task = false;
  // Body targets interpolate smoothly across the phase.
  Eigen::Vector2d body_start = Eigen::Vector2d::Zero();
  Eigen::Vector2d body_end = Eigen::Vector2d::Zero();
  double pitch_target = 0.0;
};

struct PhasePlan {
  std::vector<TiptoePhaseSpec> phases;
  Eigen::VectorXd start_pose;       // joints
  double start_base_height = 0.0;
  Eigen::VectorXd posture_target;   // joint posture task target
  std::string warning;

  double duration() const {
    return phases.empty() ? 0.0 : phases.back().t_end;
  }
  const TiptoePhaseSpec& phase_at(double t) const;
};

/// Three-phase tiptoe procedure: flat-foot rise, forward CoM shift onto the
/// toe footprint, then heel release with a knee-holding task added.
PhasePlan tiptoe_plan(const RobotModel& model, const TiptoeTimings& timings);

/// Default whole-body gain profile for standing balance.
ImpedanceGains tiptoe_gains(const RobotModel& model);

/// Wraps the plan into a rollout controller: per tick it interpolates the
/// phase targets, runs wbc_solve, and converts the commands to joint torques
/// through impedance control. Falls back to the last feasible command when
/// the force program fails.
sim::Controller make_tiptoe_controller(std::shared_ptr<sim::PlanarDynamics> dynamics,
                                       const PhasePlan& plan,
                                       const ImpedanceGains& gains);

}  // namespace uniped::control

#endif  // UNIPED_CONTROL_TIPTOE_HPP_
