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

#include "uniped/so3.hpp"

#include <gtest/gtest.h>

#include <Eigen/Geometry>
#include <numbers>
#include <random>

#include "uniped/errors.hpp"

namespace uniped {
namespace {

Eigen::Vector3d random_vec(std::mt19937& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return Eigen::Vector3d(u(rng), u(rng), u(rng));
}

TEST(ExpMap, ZeroGivesExactIdentity) {
  const Eigen::Matrix3d R = exp_map(Eigen::Vector3d::Zero());
  EXPECT_TRUE(R.isApprox(Eigen::Matrix3d::Identity(), 0.0));
}

TEST(ExpMap, QuarterTurnAboutZ) {
  const Eigen::Matrix3d R =
      exp_map(Eigen::Vector3d(0, 0, std::numbers::pi / 2));
  Eigen::Matrix3d expected;
  expected << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  EXPECT_LT((R - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ExpMap, InverseProperty) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Vector3d a = random_vec(rng, 2.0);
    const Eigen::Matrix3d prod = exp_map(a) * exp_map(-a);
    EXPECT_LT((prod - Eigen::Matrix3d::Identity()).norm(), 1e-12);
  }
}

TEST(ExpMap, JacobianMatchesFiniteDifferences) {
  std::mt19937 rng(11);
  const double h = 1e-6;
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Vector3d a =
        trial == 0 ? Eigen::Vector3d(1e-9, 0, 0) : random_vec(rng, 1.5);
    const Eigen::Matrix<double, 9, 3> J = exp_map_jacobian(a);
    for (int j = 0; j < 3; ++j) {
      const Eigen::Matrix3d Rp = exp_map(a + h * Eigen::Vector3d::Unit(j));
      const Eigen::Matrix3d Rm = exp_map(a - h * Eigen::Vector3d::Unit(j));
      const Eigen::Matrix3d fd = (Rp - Rm) / (2 * h);
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
          EXPECT_NEAR(J(3 * r + c, j), fd(r, c), 1e-8);
        }
      }
    }
  }
}

TEST(RotationError, IdenticalRotationsGiveZero) {
  const Eigen::Matrix3d R = exp_map(Eigen::Vector3d(0.3, -0.2, 0.5));
  EXPECT_LT(rotation_error(R, R).norm(), 1e-14);
}

TEST(RotationError, SmallZRotationGivesAxisTimesSine) {
  const Eigen::Matrix3d R = exp_map(Eigen::Vector3d(0, 0, 0.1));
  const Eigen::Vector3d e = rotation_error(Eigen::Matrix3d::Identity(), R);
  EXPECT_NEAR(e.x(), 0.0, 1e-15);
  EXPECT_NEAR(e.y(), 0.0, 1e-15);
  EXPECT_NEAR(e.z(), std::sin(0.1), 1e-12);  // 0.0998334...
  EXPECT_NEAR(e.z(), 0.0998334, 1e-6);
}

TEST(RotationError, AntisymmetryUnderArgumentSwap) {
  // The error axis is an eigenvector of R_err, so conjugating the swapped
  // error by R_err^T is exactly the negation.
  std::mt19937 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    Eigen::Vector3d axis = random_vec(rng, 1.0);
    if (axis.norm() < 1e-6) axis = Eigen::Vector3d::UnitX();
    axis.normalize();
    std::uniform_real_distribution<double> ang(0.01, 0.49);
    const Eigen::Matrix3d A = exp_map(random_vec(rng, 1.0));
    const Eigen::Matrix3d B = A * exp_map(ang(rng) * axis);
    const Eigen::Matrix3d R_err = A.transpose() * B;
    const Eigen::Vector3d e_ab = rotation_error(A, B);
    const Eigen::Vector3d e_ba = rotation_error(B, A);
    EXPECT_LT((e_ab + R_err.transpose() * e_ba).norm(), 1e-12);
    EXPECT_LT((e_ab + e_ba).norm(), 1e-12);
  }
}

TEST(RotationError, MagnitudeMatchesQuaternionGeodesicOracle) {
  // |vee(0.5 (E - E^T))| = sin(theta) for theta < pi/2; the geodesic angle
  // comes from an independent quaternion computation.
  std::mt19937 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Matrix3d A = exp_map(random_vec(rng, 1.2));
    Eigen::Vector3d axis = random_vec(rng, 1.0);
    if (axis.norm() < 1e-6) axis = Eigen::Vector3d::UnitZ();
    axis.normalize();
    std::uniform_real_distribution<double> ang(1e-4, std::numbers::pi / 2 - 0.01);
    const double theta = ang(rng);
    const Eigen::Matrix3d B = A * exp_map(theta * axis);
    const double geodesic =
        Eigen::Quaterniond(A).angularDistance(Eigen::Quaterniond(B));
    EXPECT_NEAR(rotation_error(A, B).norm(), std::sin(geodesic), 1e-10);
  }
}

TEST(RotationError, RejectsNonOrthonormalInput) {
  Eigen::Matrix3d bad = Eigen::Matrix3d::Identity();
  bad(0, 0) = 1.1;
  EXPECT_THROW(rotation_error(bad, Eigen::Matrix3d::Identity()), NumericError);
  EXPECT_THROW(rotation_error(Eigen::Matrix3d::Identity(), bad), NumericError);
}

TEST(Reorthonormalize, ProjectsBackOntoSO3) {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::Matrix3d R = exp_map(random_vec(rng, 2.0));
    R += 1e-4 * Eigen::Matrix3d::Random();
    const Eigen::Matrix3d fixed = reorthonormalize(R);
    EXPECT_LT(orthonormality_defect(fixed), 1e-14);
    EXPECT_GT(fixed.determinant(), 0.0);
  }
}

}  // namespace
}  // namespace uniped
