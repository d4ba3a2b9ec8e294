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

#ifndef UNIPED_CONTROL_WBC_HPP_
#define UNIPED_CONTROL_WBC_HPP_

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "uniped/sim/simulator.hpp"

namespace uniped::control {

enum class TaskKind {
  kBodyOrientation,    // target: pitch (1)
  kBodyPosition,       // target: x, z (2)
  kKneeJointPosition,  // target: knee angle (1)
  kJointPosture,       // target: all joints (n)
};

struct TaskSpec {
  TaskKind kind = TaskKind::kJointPosture;
  int priority = 0;  // lower number = higher priority; unique within a stack
  Eigen::VectorXd target;
  Eigen::VectorXd target_velocity;  // defaults to zero
  double kp = 1.0;  // displacement resolution factor / wrench PD stiffness
  double kd = 0.0;  // wrench PD damping (body tasks)
};

struct ContactSpec {
  std::vector<int> active_points;  // indices into the model contact list
  double mu = 0.7;
};

struct WbcCommand {
  Eigen::VectorXd q_cmd;
  Eigen::VectorXd qd_cmd;
  Eigen::VectorXd tau_ff;
  /// Per active contact: (f_x, f_z), ordered as contacts.active_points.
  std::vector<Eigen::Vector2d> forces;
  bool feasible = false;
  std::string message;

  /// Center of pressure of the solved forces (x), NaN without normal load.
  double cop_x(const sim::PlanarDynamics& dynamics,
               const sim::SimState& state,
               const ContactSpec& contacts) const;
};

/// Kinematic task hierarchy under contact constraints plus a reaction-force
/// least-squares program. The contact Jacobian null space hosts the tasks in
/// priority order; reaction forces minimize the distance to the
/// gravity-balancing distribution subject to friction and unilateral
/// bounds; feed-forward torque is gravity/Coriolis compensation minus the
/// contact share. Throws ModelError for an empty contact set or task stack.
WbcCommand wbc_solve(const sim::SimState& state,
                     const sim::PlanarDynamics& dynamics,
                     const ContactSpec& contacts,
                     const std::vector<TaskSpec>& tasks);
WbcCommand wbc_solve(const sim::SimState& state, const RobotModel& model,
                     const ContactSpec& contacts,
                     const std::vector<TaskSpec>& tasks);

/// Small dense quadratic program
///   min 1/2 |y - y_ref|^2  s.t.  A y = b,  G y >= 0
/// solved with a primal active-set method (equality handled by a quadratic
/// penalty during the active-set sweep, then polished exactly on the final
/// working set). Returns false when the equalities are unreachable within
/// the inequality set.
bool solve_force_qp(const Eigen::VectorXd& y_ref, const Eigen::MatrixXd& A,
                    const Eigen::VectorXd& b, const Eigen::MatrixXd& G,
                    Eigen::VectorXd& y, std::string* message = nullptr);

}  // namespace uniped::control

#endif  // UNIPED_CONTROL_WBC_HPP_
