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

#include "uniped/io/rollout_csv.hpp"

#include <cstdio>
#include <sstream>

#include "uniped/io/trajectory_csv.hpp"

namespace uniped::io {
namespace {

void append(std::ostringstream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  out << "," << buf;
}

}  // namespace

void write_rollout_csv(const std::string& path, const sim::RolloutLog& log) {
  std::ostringstream out;
  out << "t,base_x,base_z,pitch,basevel_x,basevel_z,pitch_rate";
  for (int j = 0; j < log.n; ++j) out << ",q_" << j;
  for (int j = 0; j < log.n; ++j) out << ",qd_" << j;
  for (int j = 0; j < log.n; ++j) out << ",tau_cmd_" << j;
  for (int j = 0; j < log.n; ++j) out << ",tau_applied_" << j;
  for (int i = 0; i < log.nc; ++i) out << ",fn_" << i;
  for (int i = 0; i < log.nc; ++i) out << ",ft_" << i;
  out << ",v_bus\n";

  for (int row = 0; row < log.size(); ++row) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", log.t[row]);
    out << buf;
    for (int d = 0; d < 3; ++d) append(out, log.coords[row](d));
    for (int d = 0; d < 3; ++d) append(out, log.vel[row](d));
    for (int j = 0; j < log.n; ++j) append(out, log.coords[row](3 + j));
    for (int j = 0; j < log.n; ++j) append(out, log.vel[row](3 + j));
    for (int j = 0; j < log.n; ++j) append(out, log.tau_cmd[row](j));
    for (int j = 0; j < log.n; ++j) append(out, log.tau_applied[row](j));
    for (int i = 0; i < log.nc; ++i) append(out, log.f_n[row](i));
    for (int i = 0; i < log.nc; ++i) append(out, log.f_t[row](i));
    append(out, log.v_bus[row]);
    out << "\n";
  }
  write_text_atomic(path, out.str());
}

}  // namespace uniped::io
