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

#include "uniped/control/jump_tracker.hpp"

#include <cmath>

#include "uniped/errors.hpp"

namespace uniped::control {

TrackedTrajectory make_tracked_trajectory(
    const trajopt::JumpProblem& problem,
    const trajopt::JumpSolution& solution) {
  const int N = problem.schedule.knot_count();
  const int n = problem.model.joint_count();
  TrackedTrajectory traj;
  traj.dt = problem.schedule.dt;
  traj.liftoff_time = problem.liftoff_knot * problem.schedule.dt;
  traj.q.resize(n, N);
  traj.qd.resize(n, N);
  traj.tau_ff = solution.joint_torques;
  traj.start_base = solution.vars.p(0);
  for (int k = 0; k < N; ++k) traj.q.col(k) = solution.vars.q(k);
  for (int k = 0; k < N; ++k) {
    if (k == 0) {
      traj.qd.col(k) = (traj.q.col(1) - traj.q.col(0)) / traj.dt;
    } else if (k == N - 1) {
      traj.qd.col(k) = (traj.q.col(k) - traj.q.col(k - 1)) / traj.dt;
    } else {
      traj.qd.col(k) = (traj.q.col(k + 1) - traj.q.col(k - 1)) / (2 * traj.dt);
    }
  }
  return traj;
}

ImpedanceGains jump_gains(const RobotModel& model) {
  const int n = model.joint_count();
  ImpedanceGains g;
  // Low feedback gains; the feed-forward torque does the work.
  g.kp = Eigen::VectorXd::Constant(n, 40.0);
  g.kd = Eigen::VectorXd::Constant(n, 1.5);
  return g;
}

sim::Controller jump_tracker(const TrackedTrajectory& trajectory,
                             const ImpedanceGains& gains) {
  if (trajectory.q.cols() < 2) {
    throw ModelError("jump_tracker: trajectory needs at least two knots");
  }
  return [traj = trajectory, gains](const sim::SimState& state) {
    const int n = static_cast<int>(traj.q.rows());
    const int N = static_cast<int>(traj.q.cols());
    const double t = state.t;

    Eigen::VectorXd q_des(n), qd_des(n), tau_ff(n);
    if (t >= traj.liftoff_time) {
      // Flight: hold the liftoff posture, no feed-forward.
      const int k_lo = std::min<int>(
          N - 1, static_cast<int>(traj.liftoff_time / traj.dt));
      q_des = traj.q.col(k_lo);
      qd_des.setZero();
      tau_ff.setZero();
    } else {
      const double s = t / traj.dt;
      const int k = std::clamp<int>(static_cast<int>(s), 0, N - 2);
      const double a = std::clamp(s - k, 0.0, 1.0);
      q_des = (1 - a) * traj.q.col(k) + a * traj.q.col(k + 1);
      qd_des = (1 - a) * traj.qd.col(k) + a * traj.qd.col(k + 1);
      tau_ff = (1 - a) * traj.tau_ff.col(k) + a * traj.tau_ff.col(k + 1);
    }
    return impedance_torque(q_des, qd_des, tau_ff, state.coords.tail(n),
                            state.vel.tail(n), gains);
  };
}

}  // namespace uniped::control
