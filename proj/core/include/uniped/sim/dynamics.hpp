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

#ifndef UNIPED_SIM_DYNAMICS_HPP_
#define UNIPED_SIM_DYNAMICS_HPP_

#include <Eigen/Dense>
#include <vector>

#include "uniped/robot_model.hpp"

namespace uniped::sim {

/// Articulated dynamics of the planar floating-base chain. Generalized
/// coordinates are [x_base, z_base, pitch, q_0 .. q_{n-1}]; the sagittal
/// plane maps world x and z, with pitch about +y.
class PlanarDynamics {
 public:
  /// `fixed_base` pins the floating base (zero base acceleration), turning
  /// the chain into a ground-mounted arm for bench tests.
  explicit PlanarDynamics(const RobotModel& model, bool fixed_base = false);

  bool fixed_base() const { return fixed_base_; }
  int joint_count() const { return n_; }
  int dof() const { return 3 + n_; }
  int contact_count() const { return static_cast<int>(contact_link_.size()); }
  double total_mass() const { return total_mass_; }
  const RobotModel& model() const { return *model_; }

  struct PointKinematics {
    Eigen::Vector2d pos;       // world (x, z)
    Eigen::Vector2d vel;
    Eigen::MatrixXd jacobian;  // 2 x dof
  };

  /// Kinematics of every contact point.
  std::vector<PointKinematics> contact_kinematics(
      const Eigen::VectorXd& coords, const Eigen::VectorXd& vel) const;

  /// Joint-space mass matrix (dof x dof).
  Eigen::MatrixXd mass_matrix(const Eigen::VectorXd& coords) const;

  /// Velocity-product and gravity terms: M qdd + bias = tau_generalized.
  Eigen::VectorXd bias(const Eigen::VectorXd& coords,
                       const Eigen::VectorXd& vel) const;

  /// bias() at zero velocity: the gravity load.
  Eigen::VectorXd gravity(const Eigen::VectorXd& coords) const;

  /// Kinetic plus gravitational potential energy.
  double total_energy(const Eigen::VectorXd& coords,
                      const Eigen::VectorXd& vel) const;

  /// Planar center of mass (x, z) including the torso payload, and its
  /// Jacobian rows if requested.
  Eigen::Vector2d com(const Eigen::VectorXd& coords,
                      Eigen::MatrixXd* jacobian = nullptr) const;

 private:
  struct Body {
    double mass = 0.0;
    double inertia_yy = 0.0;
    double length = 0.0;
    double com_offset = 0.0;
  };

  struct Frames {
    std::vector<Eigen::Vector2d> origin;  // per link
    std::vector<double> angle;            // absolute link angle
  };
  Frames frames(const Eigen::VectorXd& coords) const;

  /// Jacobian of a point at local offset u on link l.
  Eigen::MatrixXd point_jacobian(const Frames& fr, int link,
                                 const Eigen::Vector2d& local) const;
  Eigen::Vector2d point_position(const Frames& fr, int link,
                                 const Eigen::Vector2d& local) const;
  /// Acceleration of the point with zero generalized acceleration.
  Eigen::Vector2d point_bias_accel(const Frames& fr, int link,
                                   const Eigen::Vector2d& local,
                                   const Eigen::VectorXd& vel) const;

  /// Reflected actuator inertia block J_theta^T diag(I_out) J_theta and its
  /// velocity-product terms.
  void add_drivetrain_inertia(const Eigen::VectorXd& q,
                              Eigen::MatrixXd& M_joints) const;
  Eigen::VectorXd drivetrain_bias(const Eigen::VectorXd& q,
                                  const Eigen::VectorXd& qd) const;

  const RobotModel* model_;
  bool fixed_base_ = false;
  int n_ = 0;
  Eigen::VectorXd reflected_inertia_;  // per motor, at the actuator output
  std::vector<Body> bodies_;
  std::vector<int> contact_link_;
  std::vector<Eigen::Vector2d> contact_local_;
  double total_mass_ = 0.0;
};

}  // namespace uniped::sim

#endif  // UNIPED_SIM_DYNAMICS_HPP_
