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

#ifndef UNIPED_SIM_SIMULATOR_HPP_
#define UNIPED_SIM_SIMULATOR_HPP_

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "uniped/sim/dynamics.hpp"

namespace uniped::sim {

/// Articulated simulator state. `contact_anchor` carries the tangential
/// anchor point of the regularized friction model per contact.
struct SimState {
  Eigen::VectorXd coords;  // x, z, pitch, q
  Eigen::VectorXd vel;
  double t = 0.0;
  Eigen::VectorXd contact_anchor;

  Eigen::VectorXd q(int n) const { return coords.tail(n); }
  Eigen::VectorXd qd(int n) const { return vel.tail(n); }
};

/// Spring-damper ground contact with regularized Coulomb friction.
struct ContactModelParams {
  double k_n = 1e5;   // N/m
  double d_n = 3e3;   // N s/m
  double mu = 0.7;
  double k_t = 2e4;   // N/m tangential stick stiffness
  double d_t = 200.0; // N s/m tangential damping
};

/// Per-step contact and torque log.
struct StepLog {
  Eigen::VectorXd f_n;  // per contact, N
  Eigen::VectorXd f_t;
  Eigen::VectorXd applied_torque;  // post-clamp joint torques
};

/// One explicit substep: assembles the floating-base dynamics, applies
/// penalty contact forces through the contact Jacobians, and advances with
/// semi-implicit Euler. dt must be at most 2e-4 s. Throws NumericError for
/// non-finite torques or a singular mass matrix.
SimState sim_step(const SimState& state, const Eigen::VectorXd& joint_torques,
                  const PlanarDynamics& dynamics,
                  const ContactModelParams& contact, double dt,
                  StepLog* log = nullptr);

/// Standing state resting on the ground at the given pose. When contact
/// parameters are supplied, the base is sunk by the static spring
/// deflection so the ground carries the weight from the first step.
SimState make_standing_state(const PlanarDynamics& dynamics,
                             const Eigen::VectorXd& q, double base_height);
SimState make_standing_state(const PlanarDynamics& dynamics,
                             const Eigen::VectorXd& q, double base_height,
                             const ContactModelParams& contact);

/// Motor-level torque pipeline inserted between controller and plant:
/// commanded joint torques map to motor torques through the co-actuation
/// Jacobian, each motor clamps against its speed/voltage envelope, and the
/// bus voltage sags with total current through a battery resistance.
struct ActuationOptions {
  bool enabled = true;
  double v_bus = 48.0;
  double battery_resistance = 0.0;  // ohm; 0 = ideal bus
};

struct RolloutOptions {
  // Explicit integration of the contact damper against the light toe link
  // needs a finer substep than the 500 Hz control rate suggests.
  double dt_sim = 2.5e-5;
  double control_rate = 500.0;  // Hz, zero-order hold
  ContactModelParams contact;
  ActuationOptions actuation;
  /// Dead-zone width injected on the measured knee angle (rad, joint side).
  double knee_backlash_width = 0.0;
  /// Keep the partial log and mark it aborted instead of throwing when the
  /// controller or the integrator fails mid-run.
  bool keep_partial_log = false;
};

struct RolloutLog {
  int n = 0, nc = 0;
  bool aborted = false;
  std::string abort_message;
  std::vector<double> t;
  std::vector<Eigen::VectorXd> coords;
  std::vector<Eigen::VectorXd> vel;
  std::vector<Eigen::VectorXd> tau_cmd;
  std::vector<Eigen::VectorXd> tau_applied;
  std::vector<Eigen::VectorXd> f_n;
  std::vector<Eigen::VectorXd> f_t;
  std::vector<double> v_bus;

  int size() const { return static_cast<int>(t.size()); }
  double total_normal_force(int row) const { return f_n[row].sum(); }
};

using Controller = std::function<Eigen::VectorXd(const SimState&)>;

/// Runs the controller at the control rate against physics substeps and
/// returns the full log. Controller output that is not finite aborts with
/// a NumericError naming the step index.
RolloutLog rollout(const SimState& initial, const Controller& controller,
                   double duration, const PlanarDynamics& dynamics,
                   const RolloutOptions& options);

struct Phase {
  enum Kind { kStance, kFlight } kind;
  double t_start = 0.0;
  double t_end = 0.0;
};

/// Splits a rollout into stance/flight phases by thresholding the total
/// normal force at 1 N with 5 ms hysteresis.
std::vector<Phase> detect_phases(const RolloutLog& log,
                                 double force_threshold = 1.0,
                                 double hysteresis = 5e-3);

}  // namespace uniped::sim

#endif  // UNIPED_SIM_SIMULATOR_HPP_
