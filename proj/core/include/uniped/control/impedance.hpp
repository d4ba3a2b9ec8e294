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

#ifndef UNIPED_CONTROL_IMPEDANCE_HPP_
#define UNIPED_CONTROL_IMPEDANCE_HPP_

#include <Eigen/Dense>

namespace uniped::control {

struct ImpedanceGains {
  Eigen::VectorXd kp;  // N m / rad
  Eigen::VectorXd kd;  // N m s / rad
};

/// tau = tau_ff + kp .* (q_des - q) + kd .* (qd_des - qd)
Eigen::VectorXd impedance_torque(const Eigen::VectorXd& q_des,
                                 const Eigen::VectorXd& qd_des,
                                 const Eigen::VectorXd& tau_ff,
                                 const Eigen::VectorXd& q,
                                 const Eigen::VectorXd& qd,
                                 const ImpedanceGains& gains);

}  // namespace uniped::control

#endif  // UNIPED_CONTROL_IMPEDANCE_HPP_
