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

#include <cmath>

#include "uniped/errors.hpp"

namespace uniped {

Eigen::Matrix3d skew(const Eigen::Vector3d& a) {
  Eigen::Matrix3d s;
  s << 0.0, -a.z(), a.y(),  //
      a.z(), 0.0, -a.x(),   //
      -a.y(), a.x(), 0.0;
  return s;
}

Eigen::Vector3d vee(const Eigen::Matrix3d& s) {
  return Eigen::Vector3d(s(2, 1), s(0, 2), s(1, 0));
}

Eigen::Matrix3d exp_map(const Eigen::Vector3d& a) {
  const double theta2 = a.squaredNorm();
  if (theta2 == 0.0) {
    return Eigen::Matrix3d::Identity();
  }
  const double theta = std::sqrt(theta2);
  // sin(t)/t and (1-cos(t))/t^2, series below the switch point.
  double s, c2;
  if (theta < 1e-4) {
    s = 1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0;
    c2 = 0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0;
  } else {
    s = std::sin(theta) / theta;
    c2 = (1.0 - std::cos(theta)) / theta2;
  }
  const Eigen::Matrix3d ax = skew(a);
  return Eigen::Matrix3d::Identity() + s * ax + c2 * (ax * ax);
}

Eigen::Matrix<double, 9, 3> exp_map_jacobian(const Eigen::Vector3d& a) {
  const double theta2 = a.squaredNorm();
  const double theta = std::sqrt(theta2);
  // Coefficients of R = I + s*[a]x + c2*[a]x^2 and the scalars
  // ds/dtheta / theta, dc2/dtheta / theta (series-safe near zero).
  double s, c2, ds_over_t, dc2_over_t;
  if (theta < 1e-4) {
    s = 1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0;
    c2 = 0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0;
    ds_over_t = -1.0 / 3.0 + theta2 / 30.0;
    dc2_over_t = -1.0 / 12.0 + theta2 / 180.0;
  } else {
    const double st = std::sin(theta);
    const double ct = std::cos(theta);
    s = st / theta;
    c2 = (1.0 - ct) / theta2;
    ds_over_t = (theta * ct - st) / (theta2 * theta);
    dc2_over_t = (theta * st - 2.0 * (1.0 - ct)) / (theta2 * theta2);
  }
  const Eigen::Matrix3d ax = skew(a);
  const Eigen::Matrix3d ax2 = ax * ax;

  Eigen::Matrix<double, 9, 3> jac;
  for (int j = 0; j < 3; ++j) {
    const Eigen::Matrix3d ej = skew(Eigen::Vector3d::Unit(j));
    const Eigen::Matrix3d d =
        ds_over_t * a(j) * ax + s * ej + dc2_over_t * a(j) * ax2 +
        c2 * (ej * ax + ax * ej);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        jac(3 * r + c, j) = d(r, c);
      }
    }
  }
  return jac;
}

double orthonormality_defect(const Eigen::Matrix3d& R) {
  return (R.transpose() * R - Eigen::Matrix3d::Identity()).norm();
}

Eigen::Vector3d rotation_error(const Eigen::Matrix3d& R_des,
                               const Eigen::Matrix3d& R) {
  if (orthonormality_defect(R_des) > 1e-6 || orthonormality_defect(R) > 1e-6) {
    throw NumericError("rotation_error: input matrix is not orthonormal");
  }
  const Eigen::Matrix3d err = R_des.transpose() * R;
  return vee(0.5 * (err - err.transpose()));
}

Eigen::Matrix3d reorthonormalize(const Eigen::Matrix3d& R) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      R, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d out = svd.matrixU() * svd.matrixV().transpose();
  if (out.determinant() < 0.0) {
    Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
    flip(2, 2) = -1.0;
    out = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  return out;
}

}  // namespace uniped
