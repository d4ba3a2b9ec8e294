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

#include "uniped/robot_model.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "uniped/errors.hpp"
#include "uniped/so3.hpp"

namespace uniped {
namespace {

// --- independent homogeneous-transform-product oracle -----------------------

Eigen::Matrix4d make_transform(const Eigen::Matrix3d& R,
                               const Eigen::Vector3d& t) {
  Eigen::Matrix4d T = Eigen::Matrix4d::Identity();
  T.topLeftCorner<3, 3>() = R;
  T.topRightCorner<3, 1>() = t;
  return T;
}

Eigen::Matrix3d axis_rotation(const Eigen::Vector3d& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis).toRotationMatrix();
}

/// Contact positions via explicit 4x4 transform products.
std::vector<Eigen::Vector3d> fk_oracle(const RobotModel& model,
                                       const Eigen::Vector3d& base_pos,
                                       const Eigen::Matrix3d& base_rot,
                                       const Eigen::VectorXd& q) {
  std::vector<Eigen::Matrix4d> frames;
  frames.push_back(make_transform(base_rot, base_pos));
  for (int j = 0; j < model.joint_count(); ++j) {
    const Eigen::Matrix4d down = make_transform(
        Eigen::Matrix3d::Identity(),
        Eigen::Vector3d(0, 0, -model.links[j].length));
    const Eigen::Matrix4d rot = make_transform(
        axis_rotation(model.joints[j].axis, q(j)), Eigen::Vector3d::Zero());
    frames.push_back(frames.back() * down * rot);
  }
  std::vector<Eigen::Vector3d> out;
  for (const auto& c : model.contacts) {
    const Eigen::Vector4d h =
        frames[c.parent_link] *
        Eigen::Vector4d(c.offset.x(), c.offset.y(), c.offset.z(), 1.0);
    out.push_back(h.head<3>());
  }
  return out;
}

Eigen::VectorXd random_q(const RobotModel& model, std::mt19937& rng) {
  Eigen::VectorXd q(model.joint_count());
  for (int j = 0; j < model.joint_count(); ++j) {
    std::uniform_real_distribution<double> u(model.joints[j].q_min,
                                             model.joints[j].q_max);
    q(j) = u(rng);
  }
  return q;
}

RobotModel single_link_model() {
  const std::string cfg = R"(format: 1
model:
  name: single
  crouch_drop: 0.0
link:
  name: base
  length: 0.3
  mass: 2.0
  com_offset: 0.1
  inertia_diag: 0.01 0.01 0.01
link:
  name: arm
  length: 0.5
  mass: 1.0
  com_offset: 0.25
  inertia_diag: 0.02 0.02 0.002
joint:
  name: knee
  axis: 0 1 0
  q_min: -3.0
  q_max: 3.0
contact:
  link: arm
  offset: 0 0 -0.5
  group: toe
actuator:
  name: m0
  kt: 0.1
  tau_peak: 10.0
  omega_max: 40.0
  gear: 1.0
  resistance: 0.5
drivetrain:
  motors: m0
  entry:
    motor: m0
    joint: knee
    constant: 1.0
poses:
  standing: 0
)";
  RobotModel m = load_robot_model(parse_config_text(cfg, "inline"));
  return m;
}

// --- forward kinematics ------------------------------------------------------

TEST(ForwardKinematics, ZeroConfigurationStacksLinksAlongMinusZ) {
  const RobotModel m = default_robot_model();
  const Eigen::VectorXd q = Eigen::VectorXd::Zero(4);
  const auto fk = forward_kinematics(m, Eigen::Vector3d::Zero(),
                                     Eigen::Matrix3d::Identity(), q);
  const double to_toe_joint = 0.10 + 0.435 + 0.40 + 0.08;
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(fk[i].z(), -(to_toe_joint + 0.02 * (i + 1)), 1e-15);
    EXPECT_NEAR(fk[i].x(), 0.0, 1e-15);
  }
  // Heel offset is rigid in the foot frame.
  EXPECT_NEAR(fk[4].x(), -0.06, 1e-15);
  EXPECT_NEAR(fk[4].z(), -(0.10 + 0.435 + 0.40 + 0.08), 1e-15);
}

TEST(ForwardKinematics, StraightLegReachesBaseMinusTotalLength) {
  const RobotModel m = default_robot_model();
  const double L = 0.10 + 0.435 + 0.40 + 0.08 + 0.08;
  const double base_height = 1.4;
  const auto fk =
      forward_kinematics(m, Eigen::Vector3d(0, 0, base_height),
                         Eigen::Matrix3d::Identity(),
                         Eigen::VectorXd::Zero(4));
  double lowest = 1e30;
  for (const auto& r : fk) lowest = std::min(lowest, r.z());
  EXPECT_NEAR(lowest, base_height - L, 1e-12);
}

TEST(ForwardKinematics, MatchesTransformChainOracle) {
  const RobotModel m = default_robot_model();
  std::mt19937 rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::VectorXd q = random_q(m, rng);
    const Eigen::Vector3d p(0.3, 0.0, 1.1);
    const Eigen::Matrix3d R = axis_rotation(Eigen::Vector3d::UnitY(), 0.21);
    const auto fk = forward_kinematics(m, p, R, q);
    const auto oracle = fk_oracle(m, p, R, q);
    for (size_t i = 0; i < fk.size(); ++i) {
      EXPECT_LT((fk[i] - oracle[i]).norm(), 1e-10);
    }
  }
}

TEST(ForwardKinematics, PlanarYComponentsAreExactlyZero) {
  const RobotModel m = default_robot_model();
  std::mt19937 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto fk = forward_kinematics(m, Eigen::Vector3d(0.1, 0, 1.0),
                                       Eigen::Matrix3d::Identity(),
                                       random_q(m, rng));
    for (const auto& r : fk) EXPECT_EQ(r.y(), 0.0);
  }
}

TEST(ForwardKinematics, DimensionMismatchIsStructuredError) {
  const RobotModel m = default_robot_model();
  EXPECT_THROW(forward_kinematics(m, Eigen::Vector3d::Zero(),
                                  Eigen::Matrix3d::Identity(),
                                  Eigen::VectorXd::Zero(3)),
               ModelError);
}

// --- contact Jacobian --------------------------------------------------------

TEST(ContactJacobian, JointColumnsMatchFiniteDifferences) {
  const RobotModel m = default_robot_model();
  std::mt19937 rng(13);
  const double h = 1e-6;
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::VectorXd q = random_q(m, rng);
    const Eigen::Vector3d p(0.05, 0, 1.0);
    const Eigen::Matrix3d R = axis_rotation(Eigen::Vector3d::UnitY(), -0.15);
    const auto J = contact_jacobian(m, p, R, q);
    for (int j = 0; j < m.joint_count(); ++j) {
      const auto fp = forward_kinematics(
          m, p, R, q + h * Eigen::VectorXd::Unit(4, j));
      const auto fm = forward_kinematics(
          m, p, R, q - h * Eigen::VectorXd::Unit(4, j));
      for (int i = 0; i < m.contact_count(); ++i) {
        const Eigen::Vector3d fd = (fp[i] - fm[i]) / (2 * h);
        EXPECT_LT((J[i].col(6 + j) - fd).norm(), 1e-6);
      }
    }
  }
}

TEST(ContactJacobian, BaseLinearBlockIsIdentityAndPlanarRowsVanish) {
  const RobotModel m = default_robot_model();
  std::mt19937 rng(17);
  const auto J = contact_jacobian(m, Eigen::Vector3d(0, 0, 1),
                                  Eigen::Matrix3d::Identity(), random_q(m, rng));
  for (const auto& Ji : J) {
    const Eigen::Matrix3d linear = Ji.block(0, 0, 3, 3);
    EXPECT_TRUE(linear.isApprox(Eigen::Matrix3d::Identity()));
    // Out-of-plane row couples only to out-of-plane motions.
    for (int j = 0; j < m.joint_count(); ++j) {
      EXPECT_EQ(Ji(1, 6 + j), 0.0);
    }
  }
}

TEST(ContactJacobian, ContactOnBaseLinkHasZeroJointColumns) {
  // Model whose only contact sits on the base link itself.
  const std::string cfg = R"(format: 1
model:
  name: basecontact
  crouch_drop: 0.0
link:
  name: base
  length: 0.3
  mass: 2.0
  com_offset: 0.1
  inertia_diag: 0.01 0.01 0.01
link:
  name: arm
  length: 0.5
  mass: 1.0
  com_offset: 0.25
  inertia_diag: 0.02 0.02 0.002
joint:
  name: knee
  axis: 0 1 0
  q_min: -3.0
  q_max: 3.0
contact:
  link: base
  offset: 0.1 0 -0.05
  group: heel
actuator:
  name: m0
  kt: 0.1
  tau_peak: 10.0
  omega_max: 40.0
  gear: 1.0
  resistance: 0.5
drivetrain:
  motors: m0
  entry:
    motor: m0
    joint: knee
    constant: 1.0
poses:
  standing: 0
)";
  const RobotModel m = load_robot_model(parse_config_text(cfg, "inline"));
  const auto J = contact_jacobian(m, Eigen::Vector3d::Zero(),
                                  Eigen::Matrix3d::Identity(),
                                  Eigen::VectorXd::Constant(1, 0.7));
  EXPECT_EQ(J[0].col(6).norm(), 0.0);
}

// --- co-actuation Jacobian and torque capacity -------------------------------

TEST(CoactuationJacobian, ConstantRatiosIgnoreConfiguration) {
  const RobotModel m = default_robot_model();
  std::mt19937 rng(19);
  const Eigen::MatrixXd J1 = coactuation_jacobian(m, random_q(m, rng));
  const Eigen::MatrixXd J2 = coactuation_jacobian(m, random_q(m, rng));
  EXPECT_DOUBLE_EQ(J1(1, 1), 40.0 / 9.0);
  EXPECT_DOUBLE_EQ(J2(1, 1), 40.0 / 9.0);
  EXPECT_DOUBLE_EQ(J1(0, 0), 1.5);
  EXPECT_DOUBLE_EQ(J1(2, 2), 5.0);
}

TEST(CoactuationJacobian, IdentityDrivetrainGivesIdentity) {
  const RobotModel m = single_link_model();
  for (double q : {-1.0, 0.0, 2.0}) {
    const Eigen::MatrixXd J =
        coactuation_jacobian(m, Eigen::VectorXd::Constant(1, q));
    EXPECT_TRUE(J.isApprox(Eigen::MatrixXd::Identity(1, 1)));
  }
}

TEST(CoactuationJacobian, AssistRowsFollowConfiguredPolynomials) {
  const RobotModel m = default_robot_model();
  for (double knee : {0.4, 1.6}) {
    Eigen::VectorXd q(4);
    q << -0.5, knee, -0.6, -1.4;
    const Eigen::MatrixXd J = coactuation_jacobian(m, q);
    // Hand-evaluated polynomials from the shipped drivetrain config.
    EXPECT_NEAR(J(2, 1), 0.35 + 0.75 * knee, 1e-15);
    EXPECT_NEAR(J(3, 1), 0.30 + 0.60 * knee, 1e-15);
  }
  Eigen::VectorXd qa(4), qb(4);
  qa << -0.5, 0.4, -0.6, -1.4;
  qb << -0.5, 1.6, -0.6, -1.4;
  EXPECT_NE(coactuation_jacobian(m, qa)(2, 1), coactuation_jacobian(m, qb)(2, 1));
}

TEST(TorqueCapacity, DirectDriveEqualsMotorPeaks) {
  const RobotModel m = single_link_model();
  const Eigen::VectorXd cap =
      joint_torque_capacity(m, Eigen::VectorXd::Constant(1, 1.2));
  EXPECT_DOUBLE_EQ(cap(0), 10.0);
}

TEST(TorqueCapacity, KneeBeltAloneGivesEighty) {
  // Belt 40/9 on an 18 Nm actuator output.
  const RobotModel m = default_robot_model();
  Eigen::VectorXd q = m.pose("standing");
  const Eigen::VectorXd cap = joint_torque_capacity(m, q);
  const double standalone =
      m.drivetrain.entry(1, 1).constant * m.drivetrain.motor_torque_max(1);
  EXPECT_NEAR(standalone, 80.0, 1e-12);
  // With assists at the straight knee the capacity sits just above 80.
  EXPECT_GT(cap(1), 80.0);
}

TEST(TorqueCapacity, CrouchedPoseExceedsHundredNewtonMeters) {
  const RobotModel m = default_robot_model();
  const Eigen::VectorXd cap = joint_torque_capacity(m, m.pose("crouch"));
  EXPECT_GE(cap(1), 100.0);
  EXPECT_GE(cap(1), 1.25 * 80.0);
}

TEST(TorqueCapacity, NegativeBoundIsModelValidationError) {
  // An assist polynomial that goes negative inside the joint box must be
  // rejected when the model is loaded.
  const std::string cfg = R"(format: 1
model:
  name: bad
  crouch_drop: 0.0
link:
  name: base
  length: 0.3
  mass: 2.0
  com_offset: 0.1
  inertia_diag: 0.01 0.01 0.01
link:
  name: arm
  length: 0.5
  mass: 1.0
  com_offset: 0.25
  inertia_diag: 0.02 0.02 0.002
joint:
  name: knee
  axis: 0 1 0
  q_min: -3.0
  q_max: 3.0
contact:
  link: arm
  offset: 0 0 -0.5
  group: toe
actuator:
  name: m0
  kt: 0.1
  tau_peak: 10.0
  omega_max: 40.0
  gear: 1.0
  resistance: 0.5
drivetrain:
  motors: m0
  entry:
    motor: m0
    joint: knee
    poly: knee 0.1 1.0
poses:
  standing: 0
)";
  EXPECT_THROW(load_robot_model(parse_config_text(cfg, "inline")), ModelError);
}

// --- center of mass ----------------------------------------------------------

TEST(CenterOfMass, SingleLinkSitsAtItsOffset) {
  const std::string cfg = R"(format: 1
model:
  name: onelink
  crouch_drop: 0.0
link:
  name: base
  length: 0.4
  mass: 3.0
  com_offset: 0.15
  inertia_diag: 0.01 0.01 0.01
link:
  name: tip
  length: 0.2
  mass: 1e-9
  com_offset: 0.1
  inertia_diag: 1e-12 1e-12 1e-12
joint:
  name: j
  axis: 0 1 0
  q_min: -1
  q_max: 1
contact:
  link: tip
  offset: 0 0 -0.2
  group: toe
actuator:
  name: m0
  kt: 0.1
  tau_peak: 10.0
  omega_max: 40.0
  gear: 1.0
  resistance: 0.5
drivetrain:
  motors: m0
  entry:
    motor: m0
    joint: j
    constant: 1.0
poses:
  standing: 0
)";
  const RobotModel m = load_robot_model(parse_config_text(cfg, "inline"));
  const Eigen::Vector3d com = com_position(
      m, Eigen::Vector3d::Zero(), Eigen::Matrix3d::Identity(),
      Eigen::VectorXd::Zero(1));
  EXPECT_NEAR(com.z(), -0.15, 1e-9);
  EXPECT_NEAR(com.x(), 0.0, 1e-12);
}

TEST(CenterOfMass, MatchesPerLinkTransformOracle) {
  const RobotModel m = default_robot_model();
  std::mt19937 rng(29);
  for (int trial = 0; trial < 15; ++trial) {
    const Eigen::VectorXd q = random_q(m, rng);
    const Eigen::Vector3d p(0.2, 0, 0.9);
    const Eigen::Matrix3d R = axis_rotation(Eigen::Vector3d::UnitY(), 0.1);

    // Independent oracle: accumulate frames with 4x4 products.
    std::vector<Eigen::Matrix4d> frames{make_transform(R, p)};
    for (int j = 0; j < m.joint_count(); ++j) {
      frames.push_back(frames.back() *
                       make_transform(Eigen::Matrix3d::Identity(),
                                      {0, 0, -m.links[j].length}) *
                       make_transform(axis_rotation(m.joints[j].axis, q(j)),
                                      Eigen::Vector3d::Zero()));
    }
    Eigen::Vector3d weighted = Eigen::Vector3d::Zero();
    for (size_t l = 0; l < m.links.size(); ++l) {
      const Eigen::Vector4d c =
          frames[l] * Eigen::Vector4d(0, 0, -m.links[l].com_offset, 1);
      double mass = m.links[l].mass + (l == 0 ? m.base_mass_extra : 0.0);
      weighted += mass * c.head<3>();
    }
    const Eigen::Vector3d oracle = weighted / m.total_mass;
    EXPECT_LT((com_position(m, p, R, q) - oracle).norm(), 1e-10);
  }
}

// --- model structure ----------------------------------------------------------

TEST(DefaultModel, MatchesDocumentedStructure) {
  const RobotModel m = default_robot_model(1.0);
  EXPECT_EQ(m.joint_count(), 4);
  EXPECT_EQ(m.contact_count(), 5);
  int toes = 0, heels = 0;
  for (int i = 0; i < m.contact_count(); ++i) {
    EXPECT_EQ(m.contacts[i].id, i);  // dense ids in order
    if (m.contacts[i].group == ContactGroup::kToe) ++toes;
    if (m.contacts[i].group == ContactGroup::kHeel) ++heels;
  }
  EXPECT_EQ(toes, 4);
  EXPECT_EQ(heels, 1);
  EXPECT_NEAR(m.total_mass, 17.0, 1e-12);
  EXPECT_NEAR(m.links[1].length, 0.435, 1e-12);  // knee-to-body
  EXPECT_NEAR(default_robot_model(0.0).total_mass, 16.0, 1e-12);
}

TEST(FlatFootPose, KeepsContactsOnTheGround) {
  const RobotModel m = default_robot_model();
  for (double drop : {0.05, 0.15, 0.25}) {
    const Eigen::VectorXd q = flat_foot_pose(m, drop);
    const double base_z = m.standing_base_height - drop;
    const auto fk = forward_kinematics(m, Eigen::Vector3d(0, 0, base_z),
                                       Eigen::Matrix3d::Identity(), q);
    for (const auto& r : fk) EXPECT_NEAR(r.z(), 0.0, 1e-9);
    EXPECT_NEAR(base_height_for_ground_contact(m, q), base_z, 1e-9);
  }
  EXPECT_THROW(flat_foot_pose(m, 2.0), ModelError);
}

TEST(BaseFrameKinematics, SecondDerivativesMatchFiniteDifferences) {
  const RobotModel m = default_robot_model();
  std::mt19937 rng(37);
  const double h = 1e-6;
  const Eigen::VectorXd q = random_q(m, rng);
  const auto kin = base_frame_kinematics(m, q, true);
  const int n = m.joint_count();
  for (int i = 0; i < m.contact_count(); ++i) {
    for (int j = 0; j < n; ++j) {
      const auto kp = base_frame_kinematics(
          m, q + h * Eigen::VectorXd::Unit(n, j), false);
      const auto km = base_frame_kinematics(
          m, q - h * Eigen::VectorXd::Unit(n, j), false);
      for (int l = 0; l < n; ++l) {
        const Eigen::Vector3d fd =
            (kp.dpos_dq[i].col(l) - km.dpos_dq[i].col(l)) / (2 * h);
        EXPECT_LT((kin.d2pos_dqdq[i][l * n + j] - fd).norm(), 1e-6);
      }
    }
  }
}

}  // namespace
}  // namespace uniped
