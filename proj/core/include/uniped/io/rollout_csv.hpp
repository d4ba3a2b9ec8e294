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

#ifndef UNIPED_IO_ROLLOUT_CSV_HPP_
#define UNIPED_IO_ROLLOUT_CSV_HPP_

#include <string>

#include "uniped/sim/simulator.hpp"

namespace uniped::io {

/// Rollout log columns: t, base pose (x, z, pitch), base velocity, joint
/// angles and velocities, commanded and applied torques, per-contact normal
/// and tangential forces, bus voltage.
void write_rollout_csv(const std::string& path, const sim::RolloutLog& log);

}  // namespace uniped::io

#endif  // UNIPED_IO_ROLLOUT_CSV_HPP_
