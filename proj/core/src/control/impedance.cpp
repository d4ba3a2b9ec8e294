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

#include "uniped/control/impedance.hpp"

#include "uniped/errors.hpp"

namespace uniped::control {

Eigen::VectorXd impedance_torque(const Eigen::VectorXd& q_des,
                                 const Eigen::VectorXd& qd_des,
                                 const Eigen::VectorXd& tau_ff,
                                 const Eigen::VectorXd& q,
                                 const Eigen::VectorXd& qd,
                                 const ImpedanceGains& gains) {
  const auto n = q.size();
  if (q_des.size() != n || qd_des.size() != n || tau_ff.size() != n ||
      qd.size() != n || gains.kp.size() != n || gains.kd.size() != n) {
    throw ModelError("impedance_torque: dimension mismatch");
  }
  return tau_ff + gains.kp.cwiseProduct(q_des - q) +
         gains.kd.cwiseProduct(qd_des - qd);
}

}  // namespace uniped::control
