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

// Reference re-evaluation of the constraint blocks, written directly from
// their definitions with plain loops. Deliberately kept free of any code
// shared with the solver-side ResidualEvaluator.

#include "uniped/trajopt/validator.hpp"

#include <cmath>

#include "uniped/errors.hpp"

namespace uniped::trajopt {
namespace {

Eigen::Matrix3d rodrigues(const Eigen::Vector3d& a) {
  const double t2 = a.squaredNorm();
  Eigen::Matrix3d ax;
  ax << 0, -a.z(), a.y(), a.z(), 0, -a.x(), -a.y(), a.x(), 0;
  if (t2 == 0.0) return Eigen::Matrix3d::Identity();
  const double t = std::sqrt(t2);
  double s, c2;
  if (t < 1e-4) {
    s = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    c2 = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
  } else {
    s = std::sin(t) / t;
    c2 = (1.0 - std::cos(t)) / t2;
  }
  return Eigen::Matrix3d::Identity() + s * ax + c2 * ax * ax;
}

struct BlockStats {
  double max_abs = 0.0;
  double sum_abs = 0.0;
  long count = 0;
  int argmax_knot = -1;
  int argmax_contact = -1;

  void add(double violation_abs, int knot, int contact) {
    sum_abs += violation_abs;
    ++count;
    if (violation_abs > max_abs) {
      max_abs = violation_abs;
      argmax_knot = knot;
      argmax_contact = contact;
    }
  }
};

BlockViolation finish(const std::string& name, const BlockStats& s) {
  BlockViolation b;
  b.name = name;
  b.max_abs = s.max_abs;
  b.mean_abs = s.count ? s.sum_abs / static_cast<double>(s.count) : 0.0;
  b.argmax_knot = s.argmax_knot;
  b.argmax_contact = s.argmax_contact;
  return b;
}

}  // namespace

const BlockViolation& ViolationReport::block(const std::string& name) const {
  for (const auto& b : blocks) {
    if (b.name == name) return b;
  }
  throw ModelError("violation report has no block named '" + name + "'");
}

ConstraintBlocks reference_constraints(const JumpProblem& problem,
                                       const DecisionVariables& vars) {
  const RobotModel& model = problem.model;
  const int N = problem.schedule.knot_count();
  const int n = model.joint_count();
  const int nc = model.contact_count();
  const double dt = problem.schedule.dt;
  const double mu = problem.mu;
  const double mass = model.total_mass;
  const Eigen::Matrix3d inertia = model.composite_inertia;

  ConstraintBlocks out;
  out.dynamics.setZero(18 * (N - 1));
  out.kinematics.setZero(3 * nc * N);
  out.no_slip.setZero(3 * nc * (N - 1));
  out.friction.setZero(5 * nc * N);
  out.force_inactive.setZero(3 * nc * N);
  out.joint_limits.setZero(2 * n * N);
  out.torque.setZero(2 * n * N);

  for (int k = 0; k < N; ++k) {
    const Eigen::Vector3d p = vars.p(k);
    const Eigen::Matrix3d R = vars.R(k);
    const Eigen::VectorXd q = vars.q(k);

    // (2) FK_i(p_k, R_k, q_k) = r_{i,k}, via the public transform chain.
    const auto frames = link_frames(model, p, R, q);
    for (int i = 0; i < nc; ++i) {
      const auto& cp = model.contacts[i];
      const Eigen::Vector3d world =
          frames[cp.parent_link].position +
          frames[cp.parent_link].rotation * cp.offset;
      out.kinematics.segment<3>(3 * (k * nc + i)) = world - vars.r(k, i);
    }

    // (3) r_{i,k} c_{i,k} = r_{i,k+1} c_{i,k}.
    if (k + 1 < N) {
      for (int i = 0; i < nc; ++i) {
        const double c = problem.schedule.active(k, i) ? 1.0 : 0.0;
        out.no_slip.segment<3>(3 * (k * nc + i)) =
            c * (vars.r(k + 1, i) - vars.r(k, i));
      }
    }

    // (4) friction pyramid and (5) inactive-contact force.
    for (int i = 0; i < nc; ++i) {
      const Eigen::Vector3d f = vars.f(k, i);
      double* rows = out.friction.data() + 5 * (k * nc + i);
      rows[0] = mu * f.z() - f.x();
      rows[1] = mu * f.z() + f.x();
      rows[2] = mu * f.z() - f.y();
      rows[3] = mu * f.z() + f.y();
      rows[4] = f.z();
      const double c = problem.schedule.active(k, i) ? 1.0 : 0.0;
      out.force_inactive.segment<3>(3 * (k * nc + i)) = (1.0 - c) * f;
    }

    // (6) joint limits.
    for (int j = 0; j < n; ++j) {
      out.joint_limits(2 * n * k + j) = q(j) - model.joints[j].q_min;
      out.joint_limits(2 * n * k + n + j) = model.joints[j].q_max - q(j);
    }

    // (7) |tau| <= capacity with tau = -S_j^T sum_i J_i^T f_i. The joint
    // column of J_i is R times the base-frame axis cross lever; that form
    // stays exact even when the R variables drift off the manifold.
    {
      const auto base_frames =
          link_frames(model, Eigen::Vector3d::Zero(),
                      Eigen::Matrix3d::Identity(), q);
      std::vector<Eigen::Vector3d> axis(n), origin(n);
      for (int j = 0; j < n; ++j) {
        axis[j] = base_frames[j].rotation * model.joints[j].axis;
        origin[j] = base_frames[j].position +
                    base_frames[j].rotation *
                        Eigen::Vector3d(0, 0, -model.links[j].length);
      }
      Eigen::VectorXd tau = Eigen::VectorXd::Zero(n);
      for (int i = 0; i < nc; ++i) {
        const auto& cp = model.contacts[i];
        const Eigen::Vector3d s_base =
            base_frames[cp.parent_link].position +
            base_frames[cp.parent_link].rotation * cp.offset;
        const Eigen::Vector3d f = vars.f(k, i);
        for (int j = 0; j < cp.parent_link; ++j) {
          tau(j) -= (R * axis[j].cross(s_base - origin[j])).dot(f);
        }
      }
      Eigen::VectorXd cap =
          model.drivetrain.eval(q).transpose() * model.drivetrain.motor_torque_max;
      if (problem.capacity_override.size() == n) {
        for (int j = 0; j < n; ++j) {
          if (!std::isnan(problem.capacity_override(j))) {
            cap(j) = problem.capacity_override(j);
          }
        }
      }
      for (int j = 0; j < n; ++j) {
        out.torque(2 * n * k + j) = cap(j) - tau(j);
        out.torque(2 * n * k + n + j) = cap(j) + tau(j);
      }
    }

    // (1) discrete dynamics, re-derived in place.
    if (k + 1 < N) {
      Eigen::Vector3d force_sum = Eigen::Vector3d::Zero();
      Eigen::Vector3d moment = Eigen::Vector3d::Zero();
      for (int i = 0; i < nc; ++i) {
        force_sum += vars.f(k, i);
        moment += (vars.r(k, i) - p).cross(vars.f(k, i));
      }
      const Eigen::Vector3d w = vars.w(k);
      const Eigen::Vector3d v1 =
          vars.v(k) + dt * (force_sum / mass + Eigen::Vector3d(0, 0, -kGravity));
      const Eigen::Vector3d p1 = p + dt * v1;
      const Eigen::Vector3d w1 =
          w + dt * static_cast<Eigen::Vector3d>(inertia.ldlt().solve(
                  R.transpose() * moment - w.cross(inertia * w)));
      const Eigen::Matrix3d R1 = R * rodrigues(dt * w1);

      double* row = out.dynamics.data() + 18 * k;
      for (int d = 0; d < 3; ++d) row[d] = vars.p(k + 1)(d) - p1(d);
      const Eigen::Matrix3d Rn = vars.R(k + 1);
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) row[3 + 3 * r + c] = Rn(r, c) - R1(r, c);
      }
      for (int d = 0; d < 3; ++d) row[12 + d] = vars.v(k + 1)(d) - v1(d);
      for (int d = 0; d < 3; ++d) row[15 + d] = vars.w(k + 1)(d) - w1(d);
    }
  }
  return out;
}

ViolationReport validate_solution(const JumpProblem& problem,
                                  const DecisionVariables& vars) {
  const ConstraintBlocks blocks = reference_constraints(problem, vars);
  const RobotModel& model = problem.model;
  const int N = problem.schedule.knot_count();
  const int n = model.joint_count();
  const int nc = model.contact_count();

  ViolationReport rep;

  BlockStats dyn, kin, slip, fric, inact, jlim, torq;
  for (int k = 0; k + 1 < N; ++k) {
    for (int d = 0; d < 18; ++d) {
      dyn.add(std::abs(blocks.dynamics(18 * k + d)), k, -1);
    }
    for (int i = 0; i < nc; ++i) {
      for (int d = 0; d < 3; ++d) {
        slip.add(std::abs(blocks.no_slip(3 * (k * nc + i) + d)), k, i);
      }
    }
  }
  for (int k = 0; k < N; ++k) {
    for (int i = 0; i < nc; ++i) {
      for (int d = 0; d < 3; ++d) {
        kin.add(std::abs(blocks.kinematics(3 * (k * nc + i) + d)), k, i);
        inact.add(std::abs(blocks.force_inactive(3 * (k * nc + i) + d)), k, i);
      }
      for (int d = 0; d < 5; ++d) {
        fric.add(std::max(0.0, -blocks.friction(5 * (k * nc + i) + d)), k, i);
      }
    }
    for (int j = 0; j < 2 * n; ++j) {
      jlim.add(std::max(0.0, -blocks.joint_limits(2 * n * k + j)), k, -1);
      torq.add(std::max(0.0, -blocks.torque(2 * n * k + j)), k, -1);
    }
  }
  rep.blocks = {finish("dynamics", dyn),       finish("kinematics", kin),
                finish("no_slip", slip),       finish("friction", fric),
                finish("force_inactive", inact), finish("joint_limits", jlim),
                finish("torque", torq)};
  rep.max_violation = 0.0;
  for (const auto& b : rep.blocks) {
    rep.max_violation = std::max(rep.max_violation, b.max_abs);
  }

  // Torque statistics from the GRF estimate (knee by name, else joint 1).
  int knee = 1;
  for (int j = 0; j < n; ++j) {
    if (model.joints[j].name == "knee") knee = j;
  }
  for (int k = 0; k < N; ++k) {
    std::vector<Eigen::Vector3d> fs(nc);
    for (int i = 0; i < nc; ++i) fs[i] = vars.f(k, i);
    const Eigen::VectorXd tau =
        torque_estimate(model, vars.q(k), vars.R(k), fs);
    if (std::abs(tau(knee)) > rep.knee_torque_peak) {
      rep.knee_torque_peak = std::abs(tau(knee));
      rep.knee_torque_peak_knot = k;
    }
  }

  // Naive cost re-summation.
  double cost = 0.0;
  for (int k = 0; k < N; ++k) {
    const KnotReference& ref = problem.desired[k];
    const Eigen::Matrix3d E = ref.R_des.transpose() * vars.R(k);
    const Eigen::Vector3d er(0.5 * (E(2, 1) - E(1, 2)),
                             0.5 * (E(0, 2) - E(2, 0)),
                             0.5 * (E(1, 0) - E(0, 1)));
    Eigen::Matrix<double, 12, 1> e;
    e << vars.p(k) - ref.p_des, er, vars.v(k) - ref.v_des,
        vars.w(k) - ref.omega_des;
    for (int d = 0; d < 12; ++d) cost += problem.weights(d) * e(d) * e(d);
  }
  rep.cost = cost;
  return rep;
}

}  // namespace uniped::trajopt
