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

#ifndef UNIPED_SRBD_HPP_
#define UNIPED_SRBD_HPP_

#include <Eigen/Dense>
#include <vector>

namespace uniped {

inline constexpr double kGravity = 9.81;  // m/s^2

/// Single-rigid-body state: center of mass position and velocity, rotation
/// matrix, and body-frame angular velocity.
struct SRBDState {
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  Eigen::Vector3d omega = Eigen::Vector3d::Zero();
};

/// World-frame contact forces, one per contact point.
using ContactForceSet = std::vector<Eigen::Vector3d>;

/// One semi-implicit Euler step:
///   v+ = v + dt (sum f / m + g)
///   p+ = p + dt v+
///   omega+ = omega + dt I^-1 (R^T sum (r_i - p) x f_i - omega x I omega)
///   R+ = R Exp(dt omega+)
/// The result's rotation is re-orthonormalized. Throws NumericError for
/// non-finite forces, dt outside (0, 0.05], or a non-positive-definite
/// inertia.
SRBDState srbd_step(const SRBDState& state, const ContactForceSet& forces,
                    const std::vector<Eigen::Vector3d>& contact_positions,
                    double mass, const Eigen::Matrix3d& inertia_body,
                    double dt);

/// The same propagation map without the final re-orthonormalization.
/// This is the exact map the trajectory optimizer's dynamics defect uses:
/// with an orthonormal initial rotation, zero defects keep the trajectory
/// on SO(3) by construction.
SRBDState srbd_propagate_raw(const SRBDState& state,
                             const ContactForceSet& forces,
                             const std::vector<Eigen::Vector3d>& contact_positions,
                             double mass, const Eigen::Matrix3d& inertia_body,
                             double dt);

}  // namespace uniped

#endif  // UNIPED_SRBD_HPP_
