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

#include "uniped/sim/simulator.hpp"

#include <cmath>
#include <sstream>

#include "uniped/actuator.hpp"
#include "uniped/errors.hpp"

namespace uniped::sim {
namespace {

void contact_forces(const PlanarDynamics& dynamics,
                    const ContactModelParams& cm, const SimState& state,
                    const std::vector<PlanarDynamics::PointKinematics>& kin,
                    Eigen::VectorXd& f_n, Eigen::VectorXd& f_t,
                    Eigen::VectorXd& anchors_out) {
  const int nc = dynamics.contact_count();
  f_n.setZero(nc);
  f_t.setZero(nc);
  anchors_out = state.contact_anchor;
  for (int i = 0; i < nc; ++i) {
    const double z = kin[i].pos.y();
    const double x = kin[i].pos.x();
    if (z >= 0.0) {
      anchors_out(i) = x;  // contact open: anchor follows the point
      continue;
    }
    const double normal = std::max(0.0, -cm.k_n * z - cm.d_n * kin[i].vel.y());
    f_n(i) = normal;
    if (normal <= 0.0) {
      anchors_out(i) = x;
      continue;
    }
    double tangential =
        -cm.k_t * (x - state.contact_anchor(i)) - cm.d_t * kin[i].vel.x();
    const double limit = cm.mu * normal;
    if (tangential > limit) {
      tangential = limit;
      anchors_out(i) = x + (tangential + cm.d_t * kin[i].vel.x()) / cm.k_t;
    } else if (tangential < -limit) {
      tangential = -limit;
      anchors_out(i) = x + (tangential + cm.d_t * kin[i].vel.x()) / cm.k_t;
    }
    f_t(i) = tangential;
  }
}

}  // namespace

SimState sim_step(const SimState& state, const Eigen::VectorXd& joint_torques,
                  const PlanarDynamics& dynamics,
                  const ContactModelParams& contact, double dt, StepLog* log) {
  if (!(dt > 0.0 && dt <= 2e-4)) {
    throw NumericError("sim_step: dt must lie in (0, 2e-4]");
  }
  if (joint_torques.size() != dynamics.joint_count() ||
      !joint_torques.allFinite()) {
    throw NumericError("sim_step: bad joint torque vector");
  }

  const auto kin = dynamics.contact_kinematics(state.coords, state.vel);
  Eigen::VectorXd f_n, f_t, anchors;
  contact_forces(dynamics, contact, state, kin, f_n, f_t, anchors);

  Eigen::VectorXd tau_gen = Eigen::VectorXd::Zero(dynamics.dof());
  tau_gen.tail(dynamics.joint_count()) = joint_torques;
  for (int i = 0; i < dynamics.contact_count(); ++i) {
    tau_gen += kin[i].jacobian.transpose() * Eigen::Vector2d(f_t(i), f_n(i));
  }
  // Soft joint hard-stops: stiff spring-damper past the limits.
  {
    const double k_stop = 300.0, d_stop = 1.0;
    const RobotModel& model = dynamics.model();
    for (int j = 0; j < dynamics.joint_count(); ++j) {
      const double q = state.coords(3 + j);
      const double qd = state.vel(3 + j);
      if (q > model.joints[j].q_max) {
        tau_gen(3 + j) += -k_stop * (q - model.joints[j].q_max) - d_stop * qd;
      } else if (q < model.joints[j].q_min) {
        tau_gen(3 + j) += -k_stop * (q - model.joints[j].q_min) - d_stop * qd;
      }
    }
  }
  tau_gen -= dynamics.bias(state.coords, state.vel);

  const Eigen::MatrixXd M = dynamics.mass_matrix(state.coords);
  Eigen::VectorXd accel(dynamics.dof());
  Eigen::ComputationInfo info = Eigen::Success;
  if (dynamics.fixed_base()) {
    const int n = dynamics.joint_count();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(M.bottomRightCorner(n, n));
    accel.setZero();
    accel.tail(n) = ldlt.solve(tau_gen.tail(n));
    info = ldlt.info();
  } else {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
    accel = ldlt.solve(tau_gen);
    info = ldlt.info();
  }
  if (info != Eigen::Success || !accel.allFinite()) {
    std::ostringstream dump;
    dump << "sim_step: mass matrix solve failed at t=" << state.t
         << " coords=[" << state.coords.transpose() << "] vel=["
         << state.vel.transpose() << "]";
    throw NumericError(dump.str());
  }

  SimState next;
  next.vel = state.vel + dt * accel;
  next.coords = state.coords + dt * next.vel;
  next.t = state.t + dt;
  next.contact_anchor = anchors;

  if (log) {
    log->f_n = f_n;
    log->f_t = f_t;
    log->applied_torque = joint_torques;
  }
  return next;
}

SimState make_standing_state(const PlanarDynamics& dynamics,
                             const Eigen::VectorXd& q, double base_height,
                             const ContactModelParams& contact) {
  const double sink = dynamics.total_mass() * 9.81 /
                      (contact.k_n * dynamics.contact_count());
  return make_standing_state(dynamics, q, base_height - sink);
}

SimState make_standing_state(const PlanarDynamics& dynamics,
                             const Eigen::VectorXd& q, double base_height) {
  SimState s;
  s.coords = Eigen::VectorXd::Zero(dynamics.dof());
  s.coords(1) = base_height;
  s.coords.tail(dynamics.joint_count()) = q;
  s.vel = Eigen::VectorXd::Zero(dynamics.dof());
  s.contact_anchor = Eigen::VectorXd::Zero(dynamics.contact_count());
  const auto kin = dynamics.contact_kinematics(s.coords, s.vel);
  for (int i = 0; i < dynamics.contact_count(); ++i) {
    s.contact_anchor(i) = kin[i].pos.x();
  }
  return s;
}

RolloutLog rollout(const SimState& initial, const Controller& controller,
                   double duration, const PlanarDynamics& dynamics,
                   const RolloutOptions& options) {
  if (!(duration > 0.0)) throw NumericError("rollout: duration must be positive");
  const int n = dynamics.joint_count();
  const RobotModel& model = dynamics.model();

  const int steps = static_cast<int>(std::llround(duration / options.dt_sim));
  const int hold_steps = std::max(
      1, static_cast<int>(std::llround(1.0 / (options.control_rate *
                                              options.dt_sim))));

  int knee = -1;
  for (int j = 0; j < n; ++j) {
    if (model.joints[j].name == "knee") knee = j;
  }
  if (options.knee_backlash_width > 0.0 && knee < 0) {
    throw ModelError("rollout: backlash injection needs a joint named 'knee'");
  }
  BacklashState backlash(initial.coords(3 + std::max(knee, 0)));

  RolloutLog log;
  log.n = n;
  log.nc = dynamics.contact_count();
  log.t.reserve(steps);

  SimState state = initial;
  Eigen::VectorXd tau_cmd = Eigen::VectorXd::Zero(n);
  double v_bus = options.actuation.v_bus;
  double bus_current = 0.0;

  for (int step = 0; step < steps; ++step) {
    try {
    if (step % hold_steps == 0) {
      SimState measured = state;
      if (options.knee_backlash_width > 0.0) {
        measured.coords(3 + knee) = apply_backlash(
            state.coords(3 + knee), backlash, options.knee_backlash_width);
      }
      tau_cmd = controller(measured);
      if (tau_cmd.size() != n || !tau_cmd.allFinite()) {
        throw NumericError("rollout: controller produced a bad torque at step " +
                           std::to_string(step));
      }
    }

    Eigen::VectorXd tau_applied = tau_cmd;
    if (options.actuation.enabled) {
      v_bus = options.actuation.v_bus -
              options.actuation.battery_resistance * bus_current;
      const Eigen::VectorXd q = state.coords.tail(n);
      const Eigen::VectorXd qd = state.vel.tail(n);
      const Eigen::MatrixXd J_theta = model.drivetrain.eval(q);
      const Eigen::VectorXd motor_speed = J_theta * qd;
      Eigen::VectorXd tau_motor =
          J_theta.transpose().partialPivLu().solve(tau_cmd);
      bus_current = 0.0;
      for (int m = 0; m < n; ++m) {
        const ActuatorParams& act = model.actuators[m];
        const double avail = available_torque(act, motor_speed(m), v_bus);
        tau_motor(m) = std::clamp(tau_motor(m), -avail, avail);
        bus_current +=
            std::abs(tau_motor(m)) / (act.internal_gear_ratio * act.Kt);
      }
      tau_applied = J_theta.transpose() * tau_motor;
    }

    StepLog step_log;
    SimState next = sim_step(state, tau_applied, dynamics, options.contact,
                             options.dt_sim, &step_log);

    log.t.push_back(state.t);
    log.coords.push_back(state.coords);
    log.vel.push_back(state.vel);
    log.tau_cmd.push_back(tau_cmd);
    log.tau_applied.push_back(step_log.applied_torque);
    log.f_n.push_back(step_log.f_n);
    log.f_t.push_back(step_log.f_t);
    log.v_bus.push_back(v_bus);

    state = std::move(next);
    } catch (const Error& e) {
      if (!options.keep_partial_log) throw;
      log.aborted = true;
      log.abort_message = e.what();
      break;
    }
  }
  return log;
}

std::vector<Phase> detect_phases(const RolloutLog& log, double force_threshold,
                                 double hysteresis) {
  std::vector<Phase> phases;
  if (log.size() == 0) return phases;

  auto is_flight = [&](int row) {
    return log.total_normal_force(row) < force_threshold;
  };

  Phase current;
  current.kind = is_flight(0) ? Phase::kFlight : Phase::kStance;
  current.t_start = log.t.front();
  double pending_since = -1.0;

  for (int row = 1; row < log.size(); ++row) {
    const bool flight = is_flight(row);
    const bool differs = (flight && current.kind == Phase::kStance) ||
                         (!flight && current.kind == Phase::kFlight);
    if (differs) {
      if (pending_since < 0.0) pending_since = log.t[row];
      if (log.t[row] - pending_since >= hysteresis) {
        current.t_end = pending_since;
        phases.push_back(current);
        current.kind = flight ? Phase::kFlight : Phase::kStance;
        current.t_start = pending_since;
        pending_since = -1.0;
      }
    } else {
      pending_since = -1.0;
    }
  }
  current.t_end = log.t.back();
  phases.push_back(current);
  return phases;
}

}  // namespace uniped::sim
