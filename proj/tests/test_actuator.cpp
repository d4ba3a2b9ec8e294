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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "uniped/errors.hpp"
#include "uniped/robot_model.hpp"

namespace uniped {
namespace {

TEST(FitTorqueConstant, ExactLineThroughOrigin) {
  std::vector<DynoSample> samples;
  for (int i = 1; i <= 10; ++i) {
    samples.push_back({0.5 * i, 0.1 * 0.5 * i});
  }
  const auto fit = fit_torque_constant(samples);
  EXPECT_NEAR(fit.Kt, 0.1, 1e-14);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-14);
}

TEST(FitTorqueConstant, TwoSamples) {
  const auto fit = fit_torque_constant({{1.0, 0.2}, {2.0, 0.4}});
  EXPECT_NEAR(fit.Kt, 0.2, 1e-15);
  EXPECT_EQ(fit.sample_count, 2);
}

TEST(FitTorqueConstant, RecoversSyntheticConstantUnderNoise) {
  // 50 samples of tau = 0.095 i + N(0, 0.02), fixed seed.
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> current(0.5, 10.0);
  std::normal_distribution<double> noise(0.0, 0.02);
  std::vector<DynoSample> samples;
  for (int i = 0; i < 50; ++i) {
    const double a = current(rng);
    samples.push_back({a, 0.095 * a + noise(rng)});
  }
  const auto fit = fit_torque_constant(samples);
  EXPECT_NEAR(fit.Kt, 0.095, 0.02 * 0.095);
  EXPECT_GT(fit.r_squared, 0.99);
}

TEST(FitTorqueConstant, ScaleEquivariance) {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  std::vector<DynoSample> samples, scaled;
  for (int i = 0; i < 20; ++i) {
    const double a = u(rng), t = u(rng);
    samples.push_back({a, t});
    scaled.push_back({a, 3.5 * t});
  }
  EXPECT_DOUBLE_EQ(fit_torque_constant(scaled).Kt,
                   3.5 * fit_torque_constant(samples).Kt);
}

TEST(FitTorqueConstant, DegenerateSamplesError) {
  EXPECT_THROW(fit_torque_constant({{1.0, 0.1}}), NumericError);
  EXPECT_THROW(fit_torque_constant({{2.0, 0.1}, {2.0, 0.2}, {2.0, 0.3}}),
               NumericError);
}

// --- available torque --------------------------------------------------------

TEST(AvailableTorque, FullHeadroomAtZeroSpeedForAllDefaultActuators) {
  const RobotModel m = default_robot_model();
  for (const auto& act : m.actuators) {
    EXPECT_DOUBLE_EQ(available_torque(act, 0.0, act.v_bus_nominal),
                     act.tau_peak)
        << act.name;
  }
}

TEST(AvailableTorque, ZeroAtNoLoadSpeed) {
  ActuatorParams a;
  a.Kt = 0.1;
  a.tau_peak = 10.0;
  a.internal_gear_ratio = 6.0;
  a.winding_resistance = 0.5;
  const double no_load_output = 48.0 / (a.Kt * a.internal_gear_ratio);
  EXPECT_NEAR(available_torque(a, no_load_output, 48.0), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(available_torque(a, 1.0001 * no_load_output, 48.0), 0.0);
  EXPECT_DOUBLE_EQ(available_torque(a, 2 * no_load_output, 48.0), 0.0);
}

TEST(AvailableTorque, MonotoneAndLinearInTheElectricalRegion) {
  ActuatorParams a;
  a.Kt = 0.1;
  a.tau_peak = 1e9;  // keep the electrical limit active everywhere
  a.internal_gear_ratio = 6.0;
  a.winding_resistance = 2.0;
  const double no_load = 48.0 / (a.Kt * a.internal_gear_ratio);
  double prev = available_torque(a, 0.0, 48.0);
  for (int i = 1; i <= 100; ++i) {
    const double w = no_load * i / 100.0;
    const double tau = available_torque(a, w, 48.0);
    EXPECT_LE(tau, prev + 1e-12);
    prev = tau;
  }
  EXPECT_NEAR(available_torque(a, no_load / 2, 48.0),
              0.5 * available_torque(a, 0.0, 48.0), 1e-9);
}

TEST(AvailableTorque, NonDecreasingInBusVoltage) {
  const RobotModel m = default_robot_model();
  const auto& act = m.actuators[2];
  double prev = 0.0;
  for (double v = 10.0; v <= 48.0; v += 2.0) {
    const double tau = available_torque(act, 20.0, v);
    EXPECT_GE(tau, prev - 1e-12);
    prev = tau;
  }
}

// --- backlash ----------------------------------------------------------------

TEST(BacklashBodyError, ReproducesMeasuredGeometry) {
  // 0.19 deg at the actuator, 40/9 joint-per-actuator, 0.435 m lever.
  EXPECT_NEAR(backlash_body_error(0.19, 40.0 / 9.0, 0.435), 0.0064, 1e-4);
  EXPECT_NEAR(backlash_body_error(0.19, 40.0 / 9.0, 0.435), 0.00641, 5e-5);
  EXPECT_DOUBLE_EQ(backlash_body_error(0.0, 40.0 / 9.0, 0.435), 0.0);
  EXPECT_NEAR(backlash_body_error(0.15, 40.0 / 9.0, 0.435), 0.00506, 5e-5);
}

TEST(ApplyBacklash, ZeroWidthIsIdentity) {
  BacklashState s(0.0);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double in = u(rng);
    EXPECT_DOUBLE_EQ(apply_backlash(in, s, 0.0), in);
  }
}

TEST(ApplyBacklash, MonotoneInputLagsByHalfWidth) {
  const double w = 0.02;
  BacklashState s(0.0);
  double out = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double in = 0.005 * i;
    out = apply_backlash(in, s, w);
    if (in > w) {
      EXPECT_NEAR(out, in - w / 2, 1e-15);
    }
    EXPECT_LE(std::abs(out - in), w / 2 + 1e-15);
  }
}

TEST(ApplyBacklash, SubBandTriangleWaveHoldsOutput) {
  const double w = 0.05, center = 0.3;
  BacklashState s(center);
  for (int i = 0; i < 400; ++i) {
    const double phase = (i % 40) / 40.0;
    const double tri = phase < 0.5 ? 4 * phase - 1 : 3 - 4 * phase;
    const double in = center + 0.4 * (w / 2) * tri;
    EXPECT_DOUBLE_EQ(apply_backlash(in, s, w), center);
  }
}

TEST(ApplyBacklash, HysteresisLoopAreaMatchesBandWidth) {
  // For a triangle sweep of amplitude A > w/2 the input-output loop is a
  // parallelogram of area w * (2A - w).
  const double w = 0.04, A = 0.15;
  BacklashState s(0.0);
  double prev_in = 0.0;
  apply_backlash(prev_in, s, w);
  double area = 0.0;
  const int steps = 40000;
  // Engage, then integrate out d(in) over one full cycle.
  auto tri = [&](int i) {
    const double phase = static_cast<double>(i % steps) / steps;
    return phase < 0.25   ? 4 * A * phase
           : phase < 0.75 ? 2 * A - 4 * A * phase
                          : -4 * A + 4 * A * phase;
  };
  for (int i = 0; i < steps; ++i) apply_backlash(tri(i), s, w);
  prev_in = tri(0);
  for (int i = 1; i <= steps; ++i) {
    const double in = tri(i);
    const double out = apply_backlash(in, s, w);
    area += out * (in - prev_in);
    prev_in = in;
  }
  EXPECT_NEAR(std::abs(area), w * (2 * A - w), 1e-3);
}

}  // namespace
}  // namespace uniped
