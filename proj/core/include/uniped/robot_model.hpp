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

#ifndef UNIPED_ROBOT_MODEL_HPP_
#define UNIPED_ROBOT_MODEL_HPP_

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "uniped/actuator.hpp"
#include "uniped/config.hpp"

namespace uniped {

// The robot is a serial chain. Link 0 is the floating base (torso); joint j
// connects link j to link j+1 and sits at (0, 0, -length_j) in link j's
// frame. At the all-zero configuration every link points straight down, so
// the chain is collinear along -z.

struct LinkParams {
  std::string name;
  double length = 0.0;      // m, frame origin to distal joint
  double mass = 0.0;        // kg
  double com_offset = 0.0;  // m along the link axis (+ towards distal end)
  Eigen::Matrix3d inertia_about_com = Eigen::Matrix3d::Zero();  // kg m^2
};

struct JointSpec {
  std::string name;
  Eigen::Vector3d axis = Eigen::Vector3d::UnitY();
  double q_min = 0.0;
  double q_max = 0.0;
  std::vector<int> actuator_ids;  // drivetrain rows feeding this joint
};

enum class ContactGroup { kToe, kHeel };

struct ContactPoint {
  int id = 0;
  int parent_link = 0;  // index into RobotModel::links
  std::string parent_link_name;
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();  // m, link frame
  ContactGroup group = ContactGroup::kToe;
};

/// One entry of the motor Jacobian: a constant gear/belt ratio plus an
/// optional polynomial in a single joint coordinate.
struct DrivetrainEntry {
  double constant = 0.0;
  int poly_variable = -1;            // joint index, -1 when absent
  std::vector<double> poly_coeffs;   // c0 + c1 q + c2 q^2 + ...

  double eval(const Eigen::VectorXd& q) const;
  double eval_derivative(const Eigen::VectorXd& q) const;  // d/dq_poly_variable
};

/// Maps joint velocities to motor velocities: theta_dot = J_theta(q) qdot.
/// Motor torque limits pull back to joint capacity via J_theta^T tau_max.
struct DrivetrainMap {
  int motor_count = 0;
  std::vector<std::string> motor_names;
  std::vector<DrivetrainEntry> entries;     // row-major motor_count^2
  Eigen::VectorXd motor_torque_max;         // N m at the actuator output
  Eigen::VectorXd motor_speed_max;          // rad/s at the actuator output

  const DrivetrainEntry& entry(int motor, int joint) const;
  Eigen::MatrixXd eval(const Eigen::VectorXd& q) const;
  /// d J_theta / d q_l, same shape as eval().
  Eigen::MatrixXd eval_derivative(const Eigen::VectorXd& q, int l) const;
};

struct RobotModel {
  std::string name;
  bool planar = true;
  std::vector<LinkParams> links;
  std::vector<JointSpec> joints;     // size = links.size() - 1
  std::vector<ContactPoint> contacts;
  DrivetrainMap drivetrain;
  std::vector<ActuatorParams> actuators;  // one per drivetrain motor row

  double base_mass_extra = 0.0;  // payload rigidly attached to the torso
  double total_mass = 0.0;       // sum of link masses + payload
  Eigen::Matrix3d composite_inertia = Eigen::Matrix3d::Zero();

  std::map<std::string, Eigen::VectorXd> named_poses;  // "standing", "crouch"
  double standing_base_height = 0.0;  // base z with standing pose on ground
  double crouch_base_drop = 0.0;      // m, crouch depth below standing

  int joint_count() const { return static_cast<int>(joints.size()); }
  int contact_count() const { return static_cast<int>(contacts.size()); }
  const Eigen::VectorXd& pose(const std::string& name) const;
  Eigen::VectorXd joint_lower() const;
  Eigen::VectorXd joint_upper() const;
};

/// World-frame pose of every link frame.
struct FramePose {
  Eigen::Matrix3d rotation;
  Eigen::Vector3d position;
};
std::vector<FramePose> link_frames(const RobotModel& model,
                                   const Eigen::Vector3d& base_pos,
                                   const Eigen::Matrix3d& base_rot,
                                   const Eigen::VectorXd& q);

/// World-frame position of every contact point, in contact id order.
std::vector<Eigen::Vector3d> forward_kinematics(const RobotModel& model,
                                                const Eigen::Vector3d& base_pos,
                                                const Eigen::Matrix3d& base_rot,
                                                const Eigen::VectorXd& q);

/// Per-contact 3 x (6 + n) Jacobians with columns ordered
/// [base linear, base angular (body frame), joints] so that
/// rdot_i = J_i [v; omega; qdot].
std::vector<Eigen::MatrixXd> contact_jacobian(const RobotModel& model,
                                              const Eigen::Vector3d& base_pos,
                                              const Eigen::Matrix3d& base_rot,
                                              const Eigen::VectorXd& q);

/// Motor Jacobian J_theta(q).
Eigen::MatrixXd coactuation_jacobian(const RobotModel& model,
                                     const Eigen::VectorXd& q);

/// Configuration-dependent symmetric joint torque bound
/// J_theta(q)^T tau_motor_max. Throws ModelError on a negative entry.
Eigen::VectorXd joint_torque_capacity(const RobotModel& model,
                                      const Eigen::VectorXd& q);

/// Mass-weighted center of mass of all links plus the torso payload.
Eigen::Vector3d com_position(const RobotModel& model,
                             const Eigen::Vector3d& base_pos,
                             const Eigen::Matrix3d& base_rot,
                             const Eigen::VectorXd& q);

/// Contact kinematics expressed in the base frame, with analytic first and
/// second derivatives in q. Used by the trajectory optimizer and the
/// whole-body controller.
struct BaseFrameKinematics {
  // Per contact: position s_i, first derivatives (3 x n), and second
  // derivatives d2s/(dq_j dq_l) stored row-major as j * n + l.
  std::vector<Eigen::Vector3d> position;
  std::vector<Eigen::MatrixXd> dpos_dq;
  std::vector<std::vector<Eigen::Vector3d>> d2pos_dqdq;
};
BaseFrameKinematics base_frame_kinematics(const RobotModel& model,
                                          const Eigen::VectorXd& q,
                                          bool second_order);

/// Analytic flat-foot pose for a planar [hip, knee, ankle, toe] chain with
/// the base dropped by `base_drop` below the standing height. Keeps the hip
/// vertically above the ankle and the foot and toe flat on the ground.
Eigen::VectorXd flat_foot_pose(const RobotModel& model, double base_drop);

/// Base height that places the standing pose's lowest contact on the ground.
double base_height_for_ground_contact(const RobotModel& model,
                                      const Eigen::VectorXd& q);

/// Loads and validates a robot model from a parsed configuration tree.
RobotModel load_robot_model(const ConfigNode& root);
RobotModel load_robot_model_file(const std::string& path);

/// The documented built-in planar model (torso, thigh, shank, foot, toe;
/// four toe contacts and one heel). `payload_kg` replaces the config's
/// torso payload.
RobotModel default_robot_model(double payload_kg = 1.0);
const std::string& default_model_config_text();

}  // namespace uniped

#endif  // UNIPED_ROBOT_MODEL_HPP_
