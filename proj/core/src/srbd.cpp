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

#include "uniped/srbd.hpp"

#include <cmath>

#include "uniped/errors.hpp"
#include "uniped/so3.hpp"

namespace uniped {
namespace {

void check_inputs(const SRBDState& state, const ContactForceSet& forces,
                  const std::vector<Eigen::Vector3d>& contact_positions,
                  const Eigen::Matrix3d& inertia_body, double dt) {
  if (!(dt > 0.0 && dt <= 0.05)) {
    throw NumericError("srbd_step: dt must lie in (0, 0.05]");
  }
  if (forces.size() != contact_positions.size()) {
    throw NumericError("srbd_step: force/position count mismatch");
  }
  for (const auto& f : forces) {
    if (!f.allFinite()) throw NumericError("srbd_step: non-finite force");
  }
  if (!state.p.allFinite() || !state.R.allFinite() || !state.v.allFinite() ||
      !state.omega.allFinite()) {
    throw NumericError("srbd_step: non-finite state");
  }
  Eigen::LLT<Eigen::Matrix3d> llt(inertia_body);
  if (llt.info() != Eigen::Success) {
    throw NumericError("srbd_step: inertia must be positive-definite");
  }
}

}  // namespace

SRBDState srbd_propagate_raw(const SRBDState& state,
                             const ContactForceSet& forces,
                             const std::vector<Eigen::Vector3d>& contact_positions,
                             double mass, const Eigen::Matrix3d& inertia_body,
                             double dt) {
  const Eigen::Vector3d gravity(0.0, 0.0, -kGravity);

  Eigen::Vector3d total_force = Eigen::Vector3d::Zero();
  Eigen::Vector3d moment_world = Eigen::Vector3d::Zero();
  for (size_t i = 0; i < forces.size(); ++i) {
    total_force += forces[i];
    moment_world += (contact_positions[i] - state.p).cross(forces[i]);
  }

  SRBDState next;
  next.v = state.v + dt * (total_force / mass + gravity);
  next.p = state.p + dt * next.v;

  const Eigen::Vector3d moment_body = state.R.transpose() * moment_world;
  const Eigen::Vector3d omega_dot = inertia_body.ldlt().solve(
      moment_body - state.omega.cross(inertia_body * state.omega));
  next.omega = state.omega + dt * omega_dot;
  next.R = state.R * exp_map(dt * next.omega);
  return next;
}

SRBDState srbd_step(const SRBDState& state, const ContactForceSet& forces,
                    const std::vector<Eigen::Vector3d>& contact_positions,
                    double mass, const Eigen::Matrix3d& inertia_body,
                    double dt) {
  check_inputs(state, forces, contact_positions, inertia_body, dt);
  SRBDState next = srbd_propagate_raw(state, forces, contact_positions, mass,
                                      inertia_body, dt);
  next.R = reorthonormalize(next.R);
  return next;
}

}  // namespace uniped
