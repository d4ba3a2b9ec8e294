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

#ifndef UNIPED_IO_TRAJECTORY_CSV_HPP_
#define UNIPED_IO_TRAJECTORY_CSV_HPP_

#include <string>

#include "uniped/trajopt/problem.hpp"

namespace uniped::io {

/// Knot trajectory file contents. Columns:
///   k, t, p_x, p_y, p_z, R00..R22, v_x..v_z, w_x..w_z, q_0..q_{n-1},
///   then per contact i: r_ix, r_iy, r_iz, f_ix, f_iy, f_iz, c_i.
/// Values are printed with 12 significant digits; files are byte-stable
/// across runs.
struct TrajectoryFileData {
  double dt = 0.0;
  Eigen::VectorXd t;
  trajopt::DecisionVariables vars;
  Eigen::MatrixXi contact_active;  // N x nc
};

void write_trajectory_csv(const std::string& path,
                          const trajopt::ContactSchedule& schedule,
                          const trajopt::DecisionVariables& vars);

/// Strict reader; malformed files raise ConfigError naming the offending
/// column or line.
TrajectoryFileData read_trajectory_csv(const std::string& path);

/// Writes text atomically (temp file + rename).
void write_text_atomic(const std::string& path, const std::string& text);

}  // namespace uniped::io

#endif  // UNIPED_IO_TRAJECTORY_CSV_HPP_
