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

#ifndef UNIPED_ACTUATOR_HPP_
#define UNIPED_ACTUATOR_HPP_

#include <string>
#include <vector>

namespace uniped {

/// Electrical and mechanical parameters of one actuator. `Kt` is the
/// motor-side (rotor) torque constant; `tau_peak` and `omega_max` are at the
/// actuator output, after the internal gearbox.
struct ActuatorParams {
  std::string name;
  double Kt = 0.0;                  // N m / A, rotor side
  double tau_peak = 0.0;            // N m at the output
  double omega_max = 0.0;           // rad/s at the output
  double internal_gear_ratio = 1.0;
  double backlash_output_deg = 0.0;   // degrees at the actuator output
  double winding_resistance = 0.0;    // ohm
  double v_bus_nominal = 48.0;        // volt
  double rotor_inertia = 0.0;         // kg m^2 at the rotor
};

struct DynoSample {
  double current = 0.0;  // A
  double torque = 0.0;   // N m
};

struct TorqueConstantFit {
  double Kt = 0.0;         // N m / A
  double r_squared = 0.0;
  int sample_count = 0;
};

/// Least-squares slope through the origin of torque vs. current.
/// Requires at least two samples with nonzero current variance.
TorqueConstantFit fit_torque_constant(const std::vector<DynoSample>& samples);

/// Torque available at the actuator output for a given output speed and bus
/// voltage. Back-EMF erodes the voltage headroom: with rotor speed
/// g * |omega_motor| the available torque is
///   min(tau_peak, g * Kt * max(0, v_bus - Kt * g * |omega_motor|) / R).
double available_torque(const ActuatorParams& params, double omega_motor,
                        double v_bus);

/// Body position error produced by backlash at the actuator output:
/// lever_arm * backlash_deg * joint_per_actuator_ratio * pi / 180.
double backlash_body_error(double backlash_deg, double joint_per_actuator_ratio,
                           double lever_arm);

/// Dead-zone hysteresis tracker. The output follows the input only once the
/// input leaves the current dead band of the given width.
class BacklashState {
 public:
  explicit BacklashState(double initial_output = 0.0)
      : output_(initial_output) {}
  double output() const { return output_; }
  void reset(double output) { output_ = output; }

 private:
  friend double apply_backlash(double, BacklashState&, double);
  double output_;
};

double apply_backlash(double commanded_angle, BacklashState& state,
                      double width);

/// Reads a two-column dyno log "current_A,torque_Nm" with a header row.
std::vector<DynoSample> load_dyno_csv(const std::string& path);

}  // namespace uniped

#endif  // UNIPED_ACTUATOR_HPP_
