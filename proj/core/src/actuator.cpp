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

#include "uniped/actuator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "uniped/errors.hpp"

namespace uniped {

TorqueConstantFit fit_torque_constant(const std::vector<DynoSample>& samples) {
  const int n = static_cast<int>(samples.size());
  if (n < 2) {
    throw NumericError("fit_torque_constant: need at least 2 samples");
  }
  double sum_i = 0.0, sum_ii = 0.0, sum_it = 0.0;
  for (const auto& s : samples) {
    if (!std::isfinite(s.current) || !std::isfinite(s.torque)) {
      throw NumericError("fit_torque_constant: non-finite sample");
    }
    sum_i += s.current;
    sum_ii += s.current * s.current;
    sum_it += s.current * s.torque;
  }
  const double mean_i = sum_i / n;
  const double var_i = sum_ii / n - mean_i * mean_i;
  if (var_i <= 1e-15 * std::max(1.0, sum_ii / n)) {
    throw NumericError(
        "fit_torque_constant: degenerate samples (zero current variance)");
  }
  TorqueConstantFit fit;
  fit.sample_count = n;
  fit.Kt = sum_it / sum_ii;

  double mean_t = 0.0;
  for (const auto& s : samples) mean_t += s.torque;
  mean_t /= n;
  double ss_res = 0.0, ss_tot = 0.0;
  for (const auto& s : samples) {
    const double r = s.torque - fit.Kt * s.current;
    ss_res += r * r;
    const double d = s.torque - mean_t;
    ss_tot += d * d;
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

double available_torque(const ActuatorParams& params, double omega_motor,
                        double v_bus) {
  const double g = params.internal_gear_ratio;
  const double omega_rotor = g * std::abs(omega_motor);
  const double headroom = std::max(0.0, v_bus - params.Kt * omega_rotor);
  const double electrical = g * params.Kt * headroom / params.winding_resistance;
  return std::min(params.tau_peak, electrical);
}

double backlash_body_error(double backlash_deg, double joint_per_actuator_ratio,
                           double lever_arm) {
  return lever_arm * backlash_deg * joint_per_actuator_ratio *
         std::numbers::pi / 180.0;
}

double apply_backlash(double commanded_angle, BacklashState& state,
                      double width) {
  const double half = 0.5 * width;
  if (commanded_angle - state.output_ > half) {
    state.output_ = commanded_angle - half;
  } else if (state.output_ - commanded_angle > half) {
    state.output_ = commanded_angle + half;
  }
  return state.output_;
}

std::vector<DynoSample> load_dyno_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dyno log: " + path);
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError(path + ": empty dyno log (header row required)");
  }
  std::vector<DynoSample> samples;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r,") == std::string::npos) continue;
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',')) {
      throw ConfigError(path, line_no, "expected 'current_A,torque_Nm'");
    }
    try {
      samples.push_back({std::stod(a), std::stod(b)});
    } catch (const std::logic_error&) {
      throw ConfigError(path, line_no, "malformed number in dyno log");
    }
  }
  return samples;
}

}  // namespace uniped
