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

#ifndef UNIPED_CONTROL_JUMP_TRACKER_HPP_
#define UNIPED_CONTROL_JUMP_TRACKER_HPP_

#include <Eigen/Dense>

#include "uniped/control/impedance.hpp"
#include "uniped/sim/simulator.hpp"
#include "uniped/trajopt/solver.hpp"

namespace uniped::control {

/// Knot-sampled joint trajectory: angles, velocities (central differences),
/// and GRF-based feed-forward torques.
struct TrackedTrajectory {
  double dt = 0.01;
  double liftoff_time = 0.0;
  Eigen::MatrixXd q;       // n x N
  Eigen::MatrixXd qd;      // n x N
  Eigen::MatrixXd tau_ff;  // n x N
  Eigen::Vector3d start_base = Eigen::Vector3d::Zero();

  double duration() const { return dt * (q.cols() - 1); }
};

TrackedTrajectory make_tracked_trajectory(const trajopt::JumpProblem& problem,
                                          const trajopt::JumpSolution& solution);

/// Default low-gain profile for impedance tracking of the offline jump.
ImpedanceGains jump_gains(const RobotModel& model);

/// Impedance-tracking controller for the offline trajectory: interpolates
/// angles, velocities, and feed-forward torque before the scheduled liftoff,
/// then holds the liftoff posture through flight; queries beyond the
/// trajectory end hold the final posture.
sim::Controller jump_tracker(const TrackedTrajectory& trajectory,
                             const ImpedanceGains& gains);

}  // namespace uniped::control

#endif  // UNIPED_CONTROL_JUMP_TRACKER_HPP_
