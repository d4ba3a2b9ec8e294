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

#include "uniped/control/wbc.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "uniped/errors.hpp"

namespace uniped::control {
namespace {

constexpr double kRankTol = 1e-8;

Eigen::MatrixXd null_space(const Eigen::MatrixXd& J) {
  if (J.rows() == 0) {
    return Eigen::MatrixXd::Identity(J.cols(), J.cols());
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeFullV);
  const double smax = svd.singularValues().size()
                          ? svd.singularValues()(0)
                          : 0.0;
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > kRankTol * std::max(smax, 1e-30)) ++rank;
  }
  return svd.matrixV().rightCols(J.cols() - rank);
}

Eigen::MatrixXd pinv(const Eigen::MatrixXd& J) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      J, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  Eigen::VectorXd si = Eigen::VectorXd::Zero(s.size());
  for (int i = 0; i < s.size(); ++i) {
    if (s(i) > kRankTol * std::max(smax, 1e-30)) si(i) = 1.0 / s(i);
  }
  return svd.matrixV() * si.asDiagonal() * svd.matrixU().transpose();
}

struct TaskRows {
  Eigen::MatrixXd J;
  Eigen::VectorXd err;
  Eigen::VectorXd verr;
};

int knee_index(const RobotModel& model) {
  for (int j = 0; j < model.joint_count(); ++j) {
    if (model.joints[j].name == "knee") return j;
  }
  throw ModelError("knee joint position task requires a joint named 'knee'");
}

TaskRows task_rows(const TaskSpec& task, const sim::PlanarDynamics& dynamics,
                   const sim::SimState& state) {
  const int dof = dynamics.dof();
  const int n = dynamics.joint_count();
  TaskRows rows;
  const Eigen::VectorXd tvel =
      task.target_velocity.size()
          ? task.target_velocity
          : Eigen::VectorXd::Zero(task.target.size());
  switch (task.kind) {
    case TaskKind::kBodyOrientation: {
      rows.J = Eigen::MatrixXd::Zero(1, dof);
      rows.J(0, 2) = 1.0;
      rows.err = Eigen::VectorXd::Constant(1, task.target(0) - state.coords(2));
      rows.verr = Eigen::VectorXd::Constant(1, tvel(0) - state.vel(2));
      break;
    }
    case TaskKind::kBodyPosition: {
      rows.J = Eigen::MatrixXd::Zero(2, dof);
      rows.J(0, 0) = 1.0;
      rows.J(1, 1) = 1.0;
      rows.err = task.target - state.coords.segment<2>(0);
      rows.verr = tvel - state.vel.segment<2>(0);
      break;
    }
    case TaskKind::kKneeJointPosition: {
      const int knee = knee_index(dynamics.model());
      rows.J = Eigen::MatrixXd::Zero(1, dof);
      rows.J(0, 3 + knee) = 1.0;
      rows.err =
          Eigen::VectorXd::Constant(1, task.target(0) - state.coords(3 + knee));
      rows.verr = Eigen::VectorXd::Constant(1, tvel(0) - state.vel(3 + knee));
      break;
    }
    case TaskKind::kJointPosture: {
      rows.J = Eigen::MatrixXd::Zero(n, dof);
      rows.J.rightCols(n).setIdentity();
      rows.err = task.target - state.coords.tail(n);
      rows.verr = tvel - state.vel.tail(n);
      break;
    }
  }
  return rows;
}

/// Lever-rule vertical distribution putting the center of pressure at cop_x.
std::vector<double> lever_weights(const std::vector<double>& xs, double cop_x) {
  std::vector<double> w(xs.size(), 0.0);
  int lo = -1, hi = -1;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] <= cop_x && (lo < 0 || xs[i] > xs[lo])) lo = static_cast<int>(i);
    if (xs[i] >= cop_x && (hi < 0 || xs[i] < xs[hi])) hi = static_cast<int>(i);
  }
  if (lo < 0) lo = hi;
  if (hi < 0) hi = lo;
  if (lo == hi) {
    w[lo] = 1.0;
  } else {
    const double span = xs[hi] - xs[lo];
    w[lo] = (xs[hi] - cop_x) / span;
    w[hi] = (cop_x - xs[lo]) / span;
  }
  return w;
}

}  // namespace

bool solve_force_qp(const Eigen::VectorXd& y_ref, const Eigen::MatrixXd& A,
                    const Eigen::VectorXd& b, const Eigen::MatrixXd& G,
                    Eigen::VectorXd& y, std::string* message) {
  const int m = static_cast<int>(y_ref.size());
  const int ng = static_cast<int>(G.rows());
  const double penalty = 1e8;

  // Penalty objective: 1/2 y^T H y - c^T y with the equalities folded in.
  const Eigen::MatrixXd H =
      Eigen::MatrixXd::Identity(m, m) + penalty * A.transpose() * A;
  const Eigen::VectorXd c = y_ref + penalty * A.transpose() * b;

  if (y.size() != m) y = Eigen::VectorXd::Zero(m);
  // Clip the start into the feasible set if the caller's guess leaks out.
  if (ng && (G * y).minCoeff() < 0.0) y.setZero();

  std::set<int> working;
  for (int j = 0; j < ng; ++j) {
    if (std::abs((G.row(j) * y)(0)) < 1e-12) working.insert(j);
  }

  auto solve_eqp = [&](const std::set<int>& W, const Eigen::VectorXd& y_now,
                       Eigen::VectorXd& d, Eigen::VectorXd& mult) {
    const int nw = static_cast<int>(W.size());
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m + nw, m + nw);
    K.topLeftCorner(m, m) = H;
    int row = 0;
    for (int j : W) {
      K.block(m + row, 0, 1, m) = G.row(j);
      K.block(0, m + row, m, 1) = G.row(j).transpose();
      K(m + row, m + row) = -1e-12;  // keeps dependent rows solvable
      ++row;
    }
    Eigen::VectorXd rhs(m + nw);
    rhs.head(m) = c - H * y_now;
    rhs.tail(nw).setZero();
    const Eigen::VectorXd sol = K.fullPivLu().solve(rhs);
    d = sol.head(m);
    mult = -sol.tail(nw);
  };

  bool optimal = false;
  for (int iter = 0; iter < 50 + 10 * ng; ++iter) {
    Eigen::VectorXd d, mult;
    solve_eqp(working, y, d, mult);

    if (d.lpNorm<Eigen::Infinity>() < 1e-10 * (1.0 + y.norm())) {
      // Stationary on the working set; check multiplier signs.
      int drop = -1;
      double most_negative = -1e-9;
      int row = 0;
      for (int j : working) {
        if (mult(row) < most_negative) {
          most_negative = mult(row);
          drop = j;
        }
        ++row;
      }
      if (drop < 0) {
        optimal = true;
        break;
      }
      working.erase(drop);
      continue;
    }

    // Step to the nearest blocking constraint.
    double alpha = 1.0;
    int blocker = -1;
    for (int j = 0; j < ng; ++j) {
      if (working.count(j)) continue;
      const double gd = (G.row(j) * d)(0);
      if (gd < -1e-14) {
        const double gy = (G.row(j) * y)(0);
        const double a = -gy / gd;
        if (a < alpha) {
          alpha = a;
          blocker = j;
        }
      }
    }
    y += std::max(0.0, alpha) * d;
    if (blocker >= 0) working.insert(blocker);
    if (blocker < 0 && alpha >= 1.0) {
      // Unconstrained optimum of the working set reached; loop once more to
      // check multipliers.
      continue;
    }
  }

  // Exact polish on the final working set: hard equalities, active rows.
  {
    const int nw = static_cast<int>(working.size());
    const int na = static_cast<int>(A.rows());
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m + na + nw, m + na + nw);
    K.topLeftCorner(m, m).setIdentity();
    K.block(0, m, m, na) = A.transpose();
    K.block(m, 0, na, m) = A;
    int row = 0;
    for (int j : working) {
      K.block(m + na + row, 0, 1, m) = G.row(j);
      K.block(0, m + na + row, m, 1) = G.row(j).transpose();
      ++row;
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + na + nw);
    rhs.head(m) = y_ref;
    rhs.segment(m, na) = b;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
    if (lu.isInvertible()) {
      const Eigen::VectorXd polished = lu.solve(rhs).head(m);
      const bool primal_ok =
          ng == 0 || (G * polished).minCoeff() > -1e-8;
      if (primal_ok) y = polished;
    }
  }

  const double eq_err = (A * y - b).lpNorm<Eigen::Infinity>();
  const bool feasible = eq_err <= 1e-4 * (1.0 + b.lpNorm<Eigen::Infinity>());
  if (!feasible && message) {
    *message = "force program infeasible: equality residual " +
               std::to_string(eq_err);
  }
  (void)optimal;
  return feasible;
}

WbcCommand wbc_solve(const sim::SimState& state,
                     const sim::PlanarDynamics& dynamics,
                     const ContactSpec& contacts,
                     const std::vector<TaskSpec>& tasks) {
  if (contacts.active_points.empty()) {
    throw ModelError("wbc_solve: stance control requires an active contact");
  }
  if (tasks.empty()) throw ModelError("wbc_solve: empty task stack");
  {
    std::set<int> prios;
    for (const auto& t : tasks) {
      if (!prios.insert(t.priority).second) {
        throw ModelError("wbc_solve: task priorities must be unique");
      }
    }
  }
  const int dof = dynamics.dof();
  const int n = dynamics.joint_count();
  const int na = static_cast<int>(contacts.active_points.size());

  const auto kin = dynamics.contact_kinematics(state.coords, state.vel);

  Eigen::MatrixXd Jc(2 * na, dof);
  for (int a = 0; a < na; ++a) {
    Jc.middleRows(2 * a, 2) = kin[contacts.active_points[a]].jacobian;
  }

  // --- kinematic hierarchy ---
  std::vector<const TaskSpec*> ordered;
  for (const auto& t : tasks) ordered.push_back(&t);
  std::sort(ordered.begin(), ordered.end(),
            [](const TaskSpec* a, const TaskSpec* b) {
              return a->priority < b->priority;
            });

  Eigen::VectorXd dpos = Eigen::VectorXd::Zero(dof);
  Eigen::VectorXd dvel = Eigen::VectorXd::Zero(dof);
  Eigen::MatrixXd N = null_space(Jc);
  for (const TaskSpec* t : ordered) {
    if (N.cols() == 0) break;
    const TaskRows rows = task_rows(*t, dynamics, state);
    const Eigen::MatrixXd Jt = rows.J * N;
    const Eigen::MatrixXd Jt_pinv = pinv(Jt);
    dpos += N * (Jt_pinv * (rows.err - rows.J * dpos));
    dvel += N * (Jt_pinv * (rows.verr - rows.J * dvel));
    N = N * null_space(Jt);
  }

  WbcCommand cmd;
  cmd.q_cmd = state.coords.tail(n) + dpos.tail(n);
  cmd.qd_cmd = state.vel.tail(n) + dvel.tail(n);

  // --- reaction-force program ---
  // Linear rows: gravity/Coriolis load plus a body-position force PD.
  // The moment row places the center of pressure under the error-projected
  // center of mass (statics convention: moving the body target forward
  // moves the commanded CoP forward), plus an orientation PD.
  const Eigen::VectorXd bias = dynamics.bias(state.coords, state.vel);
  Eigen::Vector3d w_des = bias.head<3>();
  double cop_shift = 0.0;
  for (const TaskSpec* t : ordered) {
    if (t->kind == TaskKind::kBodyPosition) {
      const Eigen::Vector2d e = t->target - state.coords.segment<2>(0);
      cop_shift = e.x();
      if (t->kp > 0.0) {
        const Eigen::Vector2d ev =
            (t->target_velocity.size() ? t->target_velocity.head<2>()
                                       : Eigen::Vector2d::Zero().eval()) -
            state.vel.segment<2>(0);
        w_des.head<2>() +=
            dynamics.total_mass() * (t->kp * e + t->kd * ev);
      }
    }
  }
  {
    const double x_base = state.coords(0);
    const double z_base = state.coords(1);
    const double x_cop = dynamics.com(state.coords).x() + cop_shift;
    w_des(2) = -z_base * w_des.x() - (x_cop - x_base) * w_des.y();
    for (const TaskSpec* t : ordered) {
      if (t->kind == TaskKind::kBodyOrientation && t->kp > 0.0) {
        const double e = t->target(0) - state.coords(2);
        const double ev = (t->target_velocity.size() ? t->target_velocity(0)
                                                     : 0.0) -
                          state.vel(2);
        const double inertia_pitch = dynamics.mass_matrix(state.coords)(2, 2);
        w_des(2) += inertia_pitch * (t->kp * e + t->kd * ev);
      }
    }
  }

  Eigen::MatrixXd A(3, 2 * na);
  for (int a = 0; a < na; ++a) {
    A.block<3, 2>(0, 2 * a) =
        kin[contacts.active_points[a]].jacobian.leftCols<3>().transpose();
  }

  std::vector<double> xs(na);
  for (int a = 0; a < na; ++a) {
    xs[a] = kin[contacts.active_points[a]].pos.x();
  }
  const double weight = dynamics.total_mass() * 9.81;
  const auto lw = lever_weights(xs, dynamics.com(state.coords).x());
  Eigen::VectorXd y_ref = Eigen::VectorXd::Zero(2 * na);
  Eigen::VectorXd y_start = Eigen::VectorXd::Zero(2 * na);
  for (int a = 0; a < na; ++a) {
    y_ref(2 * a + 1) = weight * lw[a];
    y_start(2 * a + 1) = weight / na;
  }

  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(3 * na, 2 * na);
  for (int a = 0; a < na; ++a) {
    G(3 * a + 0, 2 * a + 1) = 1.0;  // f_z >= 0
    G(3 * a + 1, 2 * a) = -1.0;     // mu f_z - f_x >= 0
    G(3 * a + 1, 2 * a + 1) = contacts.mu;
    G(3 * a + 2, 2 * a) = 1.0;      // mu f_z + f_x >= 0
    G(3 * a + 2, 2 * a + 1) = contacts.mu;
  }

  Eigen::VectorXd y = y_start;
  cmd.feasible = solve_force_qp(y_ref, A, w_des, G, y, &cmd.message);

  cmd.forces.resize(na);
  Eigen::VectorXd contact_share = Eigen::VectorXd::Zero(dof);
  for (int a = 0; a < na; ++a) {
    cmd.forces[a] = y.segment<2>(2 * a);
    contact_share += kin[contacts.active_points[a]].jacobian.transpose() *
                     cmd.forces[a];
  }
  cmd.tau_ff = (bias - contact_share).tail(n);
  return cmd;
}

WbcCommand wbc_solve(const sim::SimState& state, const RobotModel& model,
                     const ContactSpec& contacts,
                     const std::vector<TaskSpec>& tasks) {
  const sim::PlanarDynamics dynamics(model);
  return wbc_solve(state, dynamics, contacts, tasks);
}

double WbcCommand::cop_x(const sim::PlanarDynamics& dynamics,
                         const sim::SimState& state,
                         const ContactSpec& contacts) const {
  const auto kin = dynamics.contact_kinematics(state.coords, state.vel);
  double moment = 0.0, normal = 0.0;
  for (size_t a = 0; a < forces.size(); ++a) {
    moment += kin[contacts.active_points[a]].pos.x() * forces[a].y();
    normal += forces[a].y();
  }
  return normal > 1e-9 ? moment / normal
                       : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace uniped::control
