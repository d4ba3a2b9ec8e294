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

#include "uniped/srbd.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <random>

#include "uniped/errors.hpp"
#include "uniped/so3.hpp"

namespace uniped {
namespace {

const Eigen::Matrix3d kAsymmetricInertia =
    Eigen::Vector3d(0.40, 0.55, 0.25).asDiagonal();

TEST(SrbdStep, BallisticApexMatchesProjectileKinematics) {
  SRBDState s;
  s.p = Eigen::Vector3d(0, 0, 1.0);
  s.v = Eigen::Vector3d(0, 0, 1.4);
  const double dt = 1e-3;
  double apex = s.p.z();
  for (int i = 0; i < 2000; ++i) {
    s = srbd_step(s, {}, {}, 17.0, kAsymmetricInertia, dt);
    apex = std::max(apex, s.p.z());
  }
  EXPECT_NEAR(apex - 1.0, 1.4 * 1.4 / (2 * kGravity), 1e-3);
}

TEST(SrbdStep, HoverForceLeavesVelocityUnchanged) {
  SRBDState s;
  s.p = Eigen::Vector3d(0.2, 0, 0.9);
  s.v = Eigen::Vector3d(0.1, 0, 0.0);
  const double m = 17.0;
  const ContactForceSet forces{Eigen::Vector3d(0, 0, m * kGravity)};
  const std::vector<Eigen::Vector3d> at{s.p};  // through the center of mass
  SRBDState next = s;
  for (int i = 0; i < 100; ++i) {
    next = srbd_step(next, forces, {next.p}, m, kAsymmetricInertia, 0.01);
  }
  EXPECT_LT((next.v - s.v).norm(), 1e-12);
  EXPECT_LT(next.omega.norm(), 1e-12);
}

TEST(SrbdStep, TorqueFreeSpinConservesAngularMomentumMagnitude) {
  SRBDState s;
  s.omega = Eigen::Vector3d(0.3, 0.5, 0.2);
  const double dt = 2e-5;
  const double L0 = (kAsymmetricInertia * s.omega).norm();
  for (int i = 0; i < 1000; ++i) {
    s = srbd_step(s, {}, {}, 17.0, kAsymmetricInertia, dt);
  }
  // World angular momentum R I omega has the body-frame magnitude.
  EXPECT_NEAR((s.R * kAsymmetricInertia * s.omega).norm(), L0, 1e-6);
}

TEST(SrbdStep, TorqueFreeSpinTracksFineStepReference) {
  // Reference: the same flow integrated 20x finer.
  SRBDState coarse, fine;
  coarse.omega = fine.omega = Eigen::Vector3d(0.4, -0.3, 0.6);
  const double dt = 1e-4;
  for (int i = 0; i < 2000; ++i) {
    coarse = srbd_step(coarse, {}, {}, 17.0, kAsymmetricInertia, dt);
    for (int j = 0; j < 20; ++j) {
      fine = srbd_step(fine, {}, {}, 17.0, kAsymmetricInertia, dt / 20);
    }
  }
  EXPECT_LT((coarse.omega - fine.omega).norm(), 1e-4);
  EXPECT_LT((coarse.R - fine.R).norm(), 1e-3);
}

TEST(SrbdStep, RotationStaysOrthonormal) {
  SRBDState s;
  s.omega = Eigen::Vector3d(2.0, -1.5, 1.0);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 5000; ++i) {
    const ContactForceSet forces{Eigen::Vector3d(u(rng), u(rng), u(rng))};
    const std::vector<Eigen::Vector3d> at{Eigen::Vector3d(0.02, 0.01, 0.0)};
    s = srbd_step(s, forces, at, 17.0, kAsymmetricInertia, 1e-3);
    ASSERT_TRUE(s.omega.allFinite());
    ASSERT_LT(orthonormality_defect(s.R), 1e-8);
  }
}

TEST(SrbdStep, ConstantForceVelocityIsExact) {
  // Increments chosen representable in binary so the sequential sum is
  // bitwise exact: dt = 2^-7, f/m + g = (0.5, 0, 0.25).
  SRBDState s;
  const double m = 16.0;
  const Eigen::Vector3d accel(0.5, 0.0, 0.25);
  const Eigen::Vector3d f = m * (accel - Eigen::Vector3d(0, 0, -kGravity));
  const double dt = 1.0 / 128.0;
  const int steps = 1000;
  SRBDState cur = s;
  for (int i = 0; i < steps; ++i) {
    cur = srbd_step(cur, {f}, {cur.p}, m, kAsymmetricInertia, dt);
  }
  const Eigen::Vector3d expected = s.v + steps * dt * accel;
  EXPECT_EQ(cur.v.x(), expected.x());
  EXPECT_EQ(cur.v.y(), expected.y());
  EXPECT_EQ(cur.v.z(), expected.z());
}

TEST(SrbdStep, DeterministicBitIdenticalOutputs) {
  SRBDState s;
  s.p = Eigen::Vector3d(0.1, -0.2, 1.0);
  s.v = Eigen::Vector3d(0.5, 0.0, -0.1);
  s.omega = Eigen::Vector3d(0.2, 0.3, -0.4);
  const ContactForceSet forces{Eigen::Vector3d(12.0, -3.0, 140.0)};
  const std::vector<Eigen::Vector3d> at{Eigen::Vector3d(0.05, 0.0, 0.0)};
  const SRBDState a = srbd_step(s, forces, at, 17.0, kAsymmetricInertia, 1e-3);
  const SRBDState b = srbd_step(s, forces, at, 17.0, kAsymmetricInertia, 1e-3);
  EXPECT_EQ(std::memcmp(a.p.data(), b.p.data(), sizeof(double) * 3), 0);
  EXPECT_EQ(std::memcmp(a.R.data(), b.R.data(), sizeof(double) * 9), 0);
  EXPECT_EQ(std::memcmp(a.v.data(), b.v.data(), sizeof(double) * 3), 0);
  EXPECT_EQ(std::memcmp(a.omega.data(), b.omega.data(), sizeof(double) * 3), 0);
}

TEST(SrbdStep, RejectsBadInputs) {
  SRBDState s;
  EXPECT_THROW(srbd_step(s, {}, {}, 17.0, kAsymmetricInertia, 0.0),
               NumericError);
  EXPECT_THROW(srbd_step(s, {}, {}, 17.0, kAsymmetricInertia, 0.06),
               NumericError);
  const ContactForceSet bad{Eigen::Vector3d(0, 0, std::nan(""))};
  EXPECT_THROW(
      srbd_step(s, bad, {Eigen::Vector3d::Zero()}, 17.0, kAsymmetricInertia,
                0.01),
      NumericError);
  const Eigen::Matrix3d indefinite = -kAsymmetricInertia;
  EXPECT_THROW(srbd_step(s, {}, {}, 17.0, indefinite, 0.01), NumericError);
}

}  // namespace
}  // namespace uniped
