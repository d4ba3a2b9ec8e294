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

#ifndef UNIPED_TRAJOPT_PROBLEM_HPP_
#define UNIPED_TRAJOPT_PROBLEM_HPP_

#include <Eigen/Dense>
#include <vector>

#include "uniped/robot_model.hpp"
#include "uniped/srbd.hpp"

namespace uniped::trajopt {

using Weight12 = Eigen::Matrix<double, 12, 1>;

/// Fixed contact schedule: c(k, i) = 1 iff contact i is active at knot k.
struct ContactSchedule {
  Eigen::MatrixXi c;  // N x n_c
  double dt = 0.01;   // s per interval

  int knot_count() const { return static_cast<int>(c.rows()); }
  int contact_count() const { return static_cast<int>(c.cols()); }
  bool active(int k, int i) const { return c(k, i) != 0; }
  /// First knot where every contact is inactive; knot_count() if none.
  int first_flight_knot() const;
};

/// Stance-then-flight schedule for a jump. The flight window is sized so the
/// ballistic apex falls inside the grid.
ContactSchedule make_jump_schedule(const RobotModel& model,
                                   double stance_duration, double dt,
                                   double flight_duration);

struct KnotReference {
  Eigen::Vector3d p_des = Eigen::Vector3d::Zero();
  Eigen::Matrix3d R_des = Eigen::Matrix3d::Identity();
  Eigen::Vector3d v_des = Eigen::Vector3d::Zero();
  Eigen::Vector3d omega_des = Eigen::Vector3d::Zero();
};

/// Index layout of the stacked decision vector. Per knot:
/// [p(3), R_vec(9, row-major), v(3), omega(3), q(n), r_i(3 each), f_i(3 each)].
struct VarLayout {
  int N = 0;   // knots
  int n = 0;   // joints
  int nc = 0;  // contacts
  int per_knot() const { return 18 + n + 6 * nc; }
  int total() const { return N * per_knot(); }
  int p(int k) const { return k * per_knot(); }
  int R(int k) const { return p(k) + 3; }
  int v(int k) const { return p(k) + 12; }
  int w(int k) const { return p(k) + 15; }
  int q(int k) const { return p(k) + 18; }
  int r(int k, int i) const { return p(k) + 18 + n + 3 * i; }
  int f(int k, int i) const { return p(k) + 18 + n + 3 * nc + 3 * i; }
};

/// Stacked decision variables with typed views.
struct DecisionVariables {
  VarLayout layout;
  Eigen::VectorXd x;

  DecisionVariables() = default;
  explicit DecisionVariables(const VarLayout& l)
      : layout(l), x(Eigen::VectorXd::Zero(l.total())) {}

  Eigen::Ref<Eigen::Vector3d> p(int k) { return x.segment<3>(layout.p(k)); }
  Eigen::Ref<Eigen::Vector3d> v(int k) { return x.segment<3>(layout.v(k)); }
  Eigen::Ref<Eigen::Vector3d> w(int k) { return x.segment<3>(layout.w(k)); }
  Eigen::Ref<Eigen::VectorXd> q(int k) {
    return x.segment(layout.q(k), layout.n);
  }
  Eigen::Ref<Eigen::Vector3d> r(int k, int i) {
    return x.segment<3>(layout.r(k, i));
  }
  Eigen::Ref<Eigen::Vector3d> f(int k, int i) {
    return x.segment<3>(layout.f(k, i));
  }
  Eigen::Vector3d p(int k) const { return x.segment<3>(layout.p(k)); }
  Eigen::Vector3d v(int k) const { return x.segment<3>(layout.v(k)); }
  Eigen::Vector3d w(int k) const { return x.segment<3>(layout.w(k)); }
  Eigen::VectorXd q(int k) const { return x.segment(layout.q(k), layout.n); }
  Eigen::Vector3d r(int k, int i) const {
    return x.segment<3>(layout.r(k, i));
  }
  Eigen::Vector3d f(int k, int i) const {
    return x.segment<3>(layout.f(k, i));
  }

  /// Row-major rotation matrix view.
  Eigen::Matrix3d R(int k) const;
  void set_R(int k, const Eigen::Matrix3d& R);

  SRBDState state(int k) const;
  void set_state(int k, const SRBDState& s);
};

struct JumpProblem {
  RobotModel model;
  ContactSchedule schedule;
  Weight12 weights = Weight12::Ones();  // diagonal of Q
  std::vector<KnotReference> desired;
  double mu = 0.7;
  SRBDState initial_state;
  Eigen::VectorXd start_q;

  /// Per-joint constant capacity override (NaN entry = use the drivetrain
  /// bound). Used to probe the benefit of co-actuation.
  Eigen::VectorXd capacity_override;

  double apex_target_z = 0.0;  // absolute base-frame apex the plan aims for
  double liftoff_z = 0.0;      // planned base height at liftoff
  double liftoff_velocity = 0.0;
  int liftoff_knot = 0;

  DecisionVariables initial_guess;

  VarLayout layout() const {
    return VarLayout{schedule.knot_count(), model.joint_count(),
                     model.contact_count()};
  }
  /// Effective capacity for block 7 at a configuration.
  Eigen::VectorXd capacity(const Eigen::VectorXd& q) const;
};

struct JumpProblemOptions {
  double mu = 0.7;
  /// Fraction of the stance spent holding the crouch before pushing.
  double hold_fraction = 0.25;
  /// Liftoff happens this far below the standing base height.
  double liftoff_margin = 0.03;
  /// Extra flight time beyond the ballistic apex, s.
  double flight_padding = 0.06;
};

/// Default tracking weights: position 100, orientation 50, velocity 10,
/// angular velocity 5.
Weight12 default_weights();

/// Builds the jump problem: stance references crouch and extend to a liftoff
/// velocity whose ballistic arc peaks `apex_rise` above the standing base
/// height, then flight references follow the arc. The initial guess
/// propagates the reference force profile through the discrete dynamics.
/// Throws ModelError for a schedule without stance knots or an apex below
/// the standing height (apex_rise < 0).
JumpProblem build_problem(const RobotModel& model,
                          const ContactSchedule& schedule,
                          const Eigen::VectorXd& start_pose,
                          double apex_rise, const Weight12& weights,
                          const JumpProblemOptions& options = {});

/// build_problem with a schedule sized for the requested apex: crouch start
/// pose, the given stance duration, and a flight window that contains the
/// ballistic apex.
JumpProblem make_default_jump_problem(const RobotModel& model,
                                      double apex_rise, double stance_duration,
                                      double dt, double mu);

/// Tracking cost: sum over knots of X_err^T Q X_err. Orientation error uses
/// rotation_error; all other errors are plain subtraction.
double eval_cost(const JumpProblem& problem, const DecisionVariables& vars);

/// GRF-based joint torque estimate tau = -S_j^T sum_i J_i^T f_i.
/// The 3-argument form evaluates the Jacobians at an identity base pose.
Eigen::VectorXd torque_estimate(const RobotModel& model,
                                const Eigen::VectorXd& q,
                                const std::vector<Eigen::Vector3d>& forces);
Eigen::VectorXd torque_estimate(const RobotModel& model,
                                const Eigen::VectorXd& q,
                                const Eigen::Matrix3d& base_rot,
                                const std::vector<Eigen::Vector3d>& forces);

}  // namespace uniped::trajopt

#endif  // UNIPED_TRAJOPT_PROBLEM_HPP_
