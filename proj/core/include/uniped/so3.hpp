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

#ifndef UNIPED_SO3_HPP_
#define UNIPED_SO3_HPP_

#include <Eigen/Dense>

namespace uniped {

/// Cross-product matrix: skew(a) * b == a x b.
Eigen::Matrix3d skew(const Eigen::Vector3d& a);

/// Inverse of skew for an exactly antisymmetric matrix.
Eigen::Vector3d vee(const Eigen::Matrix3d& s);

/// Rodrigues exponential map. Returns the identity exactly for a zero input.
Eigen::Matrix3d exp_map(const Eigen::Vector3d& axis_angle);

/// Derivative of vec(exp_map(a)) with respect to a, row-major vectorization
/// (d vec(R)[3*r + c] / d a[j]). Exact, with series expansion near zero.
Eigen::Matrix<double, 9, 3> exp_map_jacobian(const Eigen::Vector3d& axis_angle);

/// Orientation error vector between a desired and a current rotation:
/// vee(0.5 * (R_err - R_err^T)) with R_err = R_des^T * R, i.e. the error
/// axis scaled by sin(theta_err). Throws NumericError if either input is
/// not orthonormal to 1e-6.
Eigen::Vector3d rotation_error(const Eigen::Matrix3d& R_des,
                               const Eigen::Matrix3d& R);

/// Frobenius distance of R^T R from the identity.
double orthonormality_defect(const Eigen::Matrix3d& R);

/// Projects a near-rotation onto SO(3) (polar factor, det +1).
Eigen::Matrix3d reorthonormalize(const Eigen::Matrix3d& R);

}  // namespace uniped

#endif  // UNIPED_SO3_HPP_
