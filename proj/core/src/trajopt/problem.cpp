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

#include "uniped/trajopt/problem.hpp"

#include <algorithm>
#include <cmath>

#include "uniped/errors.hpp"
#include "uniped/so3.hpp"

namespace uniped::trajopt {
namespace {

/// z(t) = z0 + a3 t^3 + a4 t^4 + a5 t^5 with rest boundary conditions at 0
/// and prescribed (dz, v, a) at T.
struct PushProfile {
  double z0 = 0.0, a3 = 0.0, a4 = 0.0, a5 = 0.0, T = 0.0;

  static PushProfile make(double z0, double z1, double v1, double a1,
                          double T) {
    Eigen::Matrix3d A;
    A << T * T * T, T * T * T * T, T * T * T * T * T,  //
        3 * T * T, 4 * T * T * T, 5 * T * T * T * T,   //
        6 * T, 12 * T * T, 20 * T * T * T;
    const Eigen::Vector3d b(z1 - z0, v1, a1);
    const Eigen::Vector3d coef = A.partialPivLu().solve(b);
    return {z0, coef(0), coef(1), coef(2), T};
  }
  double pos(double t) const {
    return z0 + t * t * t * (a3 + t * (a4 + t * a5));
  }
  double vel(double t) const {
    return t * t * (3 * a3 + t * (4 * a4 + t * 5 * a5));
  }
  double acc(double t) const {
    return t * (6 * a3 + t * (12 * a4 + t * 20 * a5));
  }
};

/// Distributes a vertical force across the active contacts so the center of
/// pressure lands at `cop_x` (lever rule over the bracketing pair).
std::vector<double> cop_weights(const std::vector<Eigen::Vector3d>& points,
                                const std::vector<int>& active, double cop_x) {
  std::vector<double> w(points.size(), 0.0);
  if (active.empty()) return w;
  int lo = -1, hi = -1;
  for (int i : active) {
    const double x = points[i].x();
    if (x <= cop_x && (lo < 0 || x > points[lo].x())) lo = i;
    if (x >= cop_x && (hi < 0 || x < points[hi].x())) hi = i;
  }
  if (lo < 0) lo = hi;
  if (hi < 0) hi = lo;
  if (lo == hi) {
    w[lo] = 1.0;
    return w;
  }
  const double span = points[hi].x() - points[lo].x();
  w[lo] = (points[hi].x() - cop_x) / span;
  w[hi] = (cop_x - points[lo].x()) / span;
  return w;
}

}  // namespace

int ContactSchedule::first_flight_knot() const {
  for (int k = 0; k < knot_count(); ++k) {
    if (c.row(k).sum() == 0) return k;
  }
  return knot_count();
}

ContactSchedule make_jump_schedule(const RobotModel& model,
                                   double stance_duration, double dt,
                                   double flight_duration) {
  if (!(dt > 0.0 && dt <= 0.05)) {
    throw ModelError("make_jump_schedule: dt must lie in (0, 0.05]");
  }
  if (!(stance_duration >= 0.0) || !(flight_duration >= 0.0) ||
      !std::isfinite(stance_duration) || !std::isfinite(flight_duration)) {
    throw ModelError("make_jump_schedule: durations must be nonnegative");
  }
  const int ns = static_cast<int>(std::lround(stance_duration / dt));
  const int nf = static_cast<int>(std::ceil(flight_duration / dt));
  ContactSchedule s;
  s.dt = dt;
  s.c = Eigen::MatrixXi::Zero(ns + nf, model.contact_count());
  s.c.topRows(ns).setOnes();
  return s;
}

Eigen::Matrix3d DecisionVariables::R(int k) const {
  Eigen::Matrix3d R;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) R(r, c) = x(layout.R(k) + 3 * r + c);
  }
  return R;
}

void DecisionVariables::set_R(int k, const Eigen::Matrix3d& R) {
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) x(layout.R(k) + 3 * r + c) = R(r, c);
  }
}

SRBDState DecisionVariables::state(int k) const {
  SRBDState s;
  s.p = p(k);
  s.R = R(k);
  s.v = v(k);
  s.omega = w(k);
  return s;
}

void DecisionVariables::set_state(int k, const SRBDState& s) {
  p(k) = s.p;
  set_R(k, s.R);
  v(k) = s.v;
  w(k) = s.omega;
}

Weight12 default_weights() {
  Weight12 w;
  w << 100, 100, 100, 50, 50, 50, 10, 10, 10, 5, 5, 5;
  return w;
}

Eigen::VectorXd JumpProblem::capacity(const Eigen::VectorXd& q) const {
  // Raw bound, no sign validation: solver iterates may wander outside the
  // joint box where an assist polynomial can dip negative, and the residual
  // machinery must stay evaluable there.
  Eigen::VectorXd cap =
      model.drivetrain.eval(q).transpose() * model.drivetrain.motor_torque_max;
  if (capacity_override.size() == cap.size()) {
    for (int j = 0; j < cap.size(); ++j) {
      if (!std::isnan(capacity_override(j))) cap(j) = capacity_override(j);
    }
  }
  return cap;
}

JumpProblem build_problem(const RobotModel& model,
                          const ContactSchedule& schedule,
                          const Eigen::VectorXd& start_pose, double apex_rise,
                          const Weight12& weights,
                          const JumpProblemOptions& options) {
  if (schedule.contact_count() != model.contact_count()) {
    throw ModelError("build_problem: schedule contact count mismatch");
  }
  const int N = schedule.knot_count();
  const int ns = schedule.first_flight_knot();
  if (ns == 0) {
    throw ModelError("build_problem: infeasible schedule (zero stance knots)");
  }
  for (int k = 0; k < N; ++k) {
    // Stance-then-flight only: once airborne, contacts never return.
    if (k >= ns && schedule.c.row(k).sum() != 0) {
      throw ModelError("build_problem: schedule must be stance then flight");
    }
  }
  if (apex_rise < 0.0) {
    throw ModelError("build_problem: apex target is below the standing height");
  }

  JumpProblem prob;
  prob.model = model;
  prob.schedule = schedule;
  prob.weights = weights;
  prob.mu = options.mu;
  prob.start_q = start_pose;
  prob.capacity_override =
      Eigen::VectorXd::Constant(model.joint_count(),
                                std::numeric_limits<double>::quiet_NaN());

  const double dt = schedule.dt;
  const double z_stand = model.standing_base_height;
  const double z0 = base_height_for_ground_contact(model, start_pose);
  // A schedule without flight knots degenerates to holding the start pose.
  const bool hover = ns == N;
  const double z_lo = hover ? z0 : z_stand - options.liftoff_margin;
  const double apex_z = hover ? z0 : z_stand + apex_rise;
  const double v_lo =
      hover ? 0.0 : std::sqrt(2.0 * kGravity * (apex_z - z_lo));
  prob.apex_target_z = apex_z;
  prob.liftoff_z = z_lo;
  prob.liftoff_velocity = v_lo;
  prob.liftoff_knot = ns;

  prob.initial_state.p = Eigen::Vector3d(0, 0, z0);
  prob.initial_state.R = Eigen::Matrix3d::Identity();

  const double stance_T = ns * dt;
  const double hold_T = options.hold_fraction * stance_T;
  const double push_T = stance_T - hold_T;
  // Reach liftoff velocity with free-fall acceleration at separation so the
  // ground reaction force fades out smoothly.
  const PushProfile push =
      PushProfile::make(z0, z_lo, v_lo, -kGravity, push_T);

  prob.desired.resize(N);
  for (int k = 0; k < N; ++k) {
    const double t = k * dt;
    KnotReference& ref = prob.desired[k];
    ref.p_des = prob.initial_state.p;
    if (k < ns) {
      if (!hover && t >= hold_T) {
        ref.p_des.z() = push.pos(t - hold_T);
        ref.v_des = Eigen::Vector3d(0, 0, push.vel(t - hold_T));
      } else {
        ref.p_des.z() = z0;
      }
    } else {
      const double tf = t - stance_T;
      ref.p_des.z() = z_lo + v_lo * tf - 0.5 * kGravity * tf * tf;
      ref.v_des = Eigen::Vector3d(0, 0, v_lo - kGravity * tf);
    }
  }

  // --- Initial guess: propagate the reference force profile. ---
  DecisionVariables guess(prob.layout());
  const auto footprint =
      forward_kinematics(model, prob.initial_state.p,
                         Eigen::Matrix3d::Identity(), start_pose);
  std::vector<int> all_active(model.contact_count());
  for (int i = 0; i < model.contact_count(); ++i) all_active[i] = i;
  const auto weights_cop =
      cop_weights(footprint, all_active, prob.initial_state.p.x());

  SRBDState state = prob.initial_state;
  const double m_total = model.total_mass;
  for (int k = 0; k < N; ++k) {
    guess.set_state(k, state);
    const double t = k * dt;

    // Joint guess: flat-foot inverse kinematics tracking the base height.
    Eigen::VectorXd qk = start_pose;
    if (k >= ns) {
      qk = guess.q(ns - 1);
    } else if (!hover && t >= hold_T) {
      const double drop =
          std::clamp(z_stand - state.p.z(), options.liftoff_margin * 0.5,
                     z_stand - 0.30);
      qk = flat_foot_pose(model, drop);
    }
    guess.q(k) = qk;

    ContactForceSet forces(model.contact_count(), Eigen::Vector3d::Zero());
    if (k < ns) {
      const double az = (!hover && t >= hold_T) ? push.acc(t - hold_T) : 0.0;
      const double fz_total = m_total * (az + kGravity);
      for (int i = 0; i < model.contact_count(); ++i) {
        forces[i] = Eigen::Vector3d(0, 0, std::max(0.0, fz_total) *
                                              weights_cop[i]);
        guess.f(k, i) = forces[i];
      }
      for (int i = 0; i < model.contact_count(); ++i) {
        guess.r(k, i) = footprint[i];
      }
    } else {
      const auto world =
          forward_kinematics(model, state.p, state.R, qk);
      for (int i = 0; i < model.contact_count(); ++i) {
        guess.r(k, i) = world[i];
      }
    }

    if (k + 1 < N) {
      std::vector<Eigen::Vector3d> positions(model.contact_count());
      for (int i = 0; i < model.contact_count(); ++i) {
        positions[i] = guess.r(k, i);
      }
      state = srbd_propagate_raw(state, forces, positions, m_total,
                                 model.composite_inertia, dt);
    }
  }
  prob.initial_guess = std::move(guess);
  return prob;
}

JumpProblem make_default_jump_problem(const RobotModel& model,
                                      double apex_rise, double stance_duration,
                                      double dt, double mu) {
  JumpProblemOptions options;
  options.mu = mu;
  if (apex_rise < 0.0) {
    throw ModelError("jump apex target is below the standing height");
  }
  const double v_lo =
      std::sqrt(2.0 * kGravity * (apex_rise + options.liftoff_margin));
  const ContactSchedule schedule = make_jump_schedule(
      model, stance_duration, dt, v_lo / kGravity + options.flight_padding);
  return build_problem(model, schedule, model.pose("crouch"), apex_rise,
                       default_weights(), options);
}

double eval_cost(const JumpProblem& problem, const DecisionVariables& vars) {
  const int N = problem.schedule.knot_count();
  if (static_cast<int>(problem.desired.size()) != N ||
      vars.layout.N != N) {
    throw ModelError("eval_cost: knot count mismatch");
  }
  double cost = 0.0;
  for (int k = 0; k < N; ++k) {
    const KnotReference& ref = problem.desired[k];
    Eigen::Matrix<double, 12, 1> e;
    e.segment<3>(0) = vars.p(k) - ref.p_des;
    // Algebraic orientation error; valid for the optimizer's off-manifold
    // iterates as well.
    const Eigen::Matrix3d E = ref.R_des.transpose() * vars.R(k);
    e.segment<3>(3) = vee(0.5 * (E - E.transpose()));
    e.segment<3>(6) = vars.v(k) - ref.v_des;
    e.segment<3>(9) = vars.w(k) - ref.omega_des;
    cost += e.dot(problem.weights.asDiagonal() * e);
  }
  return cost;
}

Eigen::VectorXd torque_estimate(const RobotModel& model,
                                const Eigen::VectorXd& q,
                                const Eigen::Matrix3d& base_rot,
                                const std::vector<Eigen::Vector3d>& forces) {
  if (static_cast<int>(forces.size()) != model.contact_count()) {
    throw ModelError("torque_estimate: one force per contact required");
  }
  const auto kin = base_frame_kinematics(model, q, /*second_order=*/false);
  Eigen::VectorXd tau = Eigen::VectorXd::Zero(model.joint_count());
  for (int i = 0; i < model.contact_count(); ++i) {
    const Eigen::Vector3d f_base = base_rot.transpose() * forces[i];
    tau -= kin.dpos_dq[i].transpose() * f_base;
  }
  return tau;
}

Eigen::VectorXd torque_estimate(const RobotModel& model,
                                const Eigen::VectorXd& q,
                                const std::vector<Eigen::Vector3d>& forces) {
  return torque_estimate(model, q, Eigen::Matrix3d::Identity(), forces);
}

}  // namespace uniped::trajopt
