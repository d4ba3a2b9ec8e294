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

#include <gtest/gtest.h>

#include <random>

#include "uniped/control/impedance.hpp"
#include "uniped/control/jump_tracker.hpp"
#include "uniped/control/tiptoe.hpp"
#include "uniped/control/wbc.hpp"
#include "uniped/errors.hpp"

namespace uniped::control {
namespace {

TEST(ImpedanceTorque, MatchesHandArithmetic) {
  const int n = 3;
  ImpedanceGains g;
  g.kp = Eigen::VectorXd::Constant(n, 30.0);
  g.kd = Eigen::VectorXd::Constant(n, 1.0);
  const Eigen::VectorXd q = Eigen::VectorXd::Zero(n);
  const Eigen::VectorXd tau_ff = Eigen::VectorXd::Constant(n, 2.5);

  // State equals reference: pure feed-forward.
  EXPECT_TRUE(impedance_torque(q, q, tau_ff, q, q, g).isApprox(tau_ff));

  // Zero gains: pure feed-forward regardless of errors.
  ImpedanceGains zero;
  zero.kp = Eigen::VectorXd::Zero(n);
  zero.kd = Eigen::VectorXd::Zero(n);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  EXPECT_TRUE(impedance_torque(ones, ones, tau_ff, q, q, zero).isApprox(tau_ff));

  // Unit errors: tau = tau_ff + 30 * 1 + 1 * 1.
  const Eigen::VectorXd tau = impedance_torque(ones, ones, tau_ff, q, q, g);
  EXPECT_TRUE(tau.isApprox(tau_ff + Eigen::VectorXd::Constant(n, 31.0)));
}

// --- force QP vs brute-force oracle ------------------------------------------

double brute_force_qp(const Eigen::VectorXd& y_ref, const Eigen::MatrixXd& A,
                      const Eigen::VectorXd& b, const Eigen::MatrixXd& G,
                      Eigen::VectorXd& best_y) {
  const int m = static_cast<int>(y_ref.size());
  const int na = static_cast<int>(A.rows());
  const int ng = static_cast<int>(G.rows());
  double best = std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < (1 << ng); ++mask) {
    std::vector<int> active;
    for (int j = 0; j < ng; ++j) {
      if (mask & (1 << j)) active.push_back(j);
    }
    const int nw = static_cast<int>(active.size());
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m + na + nw, m + na + nw);
    K.topLeftCorner(m, m).setIdentity();
    K.block(0, m, m, na) = A.transpose();
    K.block(m, 0, na, m) = A;
    for (int r = 0; r < nw; ++r) {
      K.block(m + na + r, 0, 1, m) = G.row(active[r]);
      K.block(0, m + na + r, m, 1) = G.row(active[r]).transpose();
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + na + nw);
    rhs.head(m) = y_ref;
    rhs.segment(m, na) = b;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd sol = lu.solve(rhs);
    const Eigen::VectorXd y = sol.head(m);
    if (ng && (G * y).minCoeff() < -1e-9) continue;
    // Multipliers of active inequalities must be nonnegative.
    const Eigen::VectorXd mu = -sol.tail(nw);
    if (nw && mu.minCoeff() < -1e-9) continue;
    const double obj = 0.5 * (y - y_ref).squaredNorm();
    if (obj < best) {
      best = obj;
      best_y = y;
    }
  }
  return best;
}

TEST(ForceQp, MatchesBruteForceEnumeration) {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int solved = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int na = 2;  // contacts
    const int m = 2 * na;
    const double mu = 0.7;
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(3 * na, m);
    for (int a = 0; a < na; ++a) {
      G(3 * a + 0, 2 * a + 1) = 1.0;
      G(3 * a + 1, 2 * a) = -1.0;
      G(3 * a + 1, 2 * a + 1) = mu;
      G(3 * a + 2, 2 * a) = 1.0;
      G(3 * a + 2, 2 * a + 1) = mu;
    }
    Eigen::MatrixXd A(3, m);
    for (int a = 0; a < na; ++a) {
      A(0, 2 * a) = 1.0;
      A(0, 2 * a + 1) = 0.0;
      A(1, 2 * a) = 0.0;
      A(1, 2 * a + 1) = 1.0;
      // moment row with random lever arms
      A(2, 2 * a) = 0.3 * u(rng);
      A(2, 2 * a + 1) = 0.5 * u(rng);
    }
    // Feasible target wrench from a random interior point.
    Eigen::VectorXd y_feas(m);
    for (int a = 0; a < na; ++a) {
      const double fz = 40.0 + 30.0 * std::abs(u(rng));
      y_feas(2 * a + 1) = fz;
      y_feas(2 * a) = 0.8 * mu * fz * u(rng);
    }
    const Eigen::VectorXd b = A * y_feas;
    Eigen::VectorXd y_ref(m);
    for (int i = 0; i < m; ++i) y_ref(i) = 60.0 * u(rng);

    Eigen::VectorXd oracle_y;
    const double oracle = brute_force_qp(y_ref, A, b, G, oracle_y);
    if (!std::isfinite(oracle)) continue;
    ++solved;

    Eigen::VectorXd y = y_feas;
    const bool ok = solve_force_qp(y_ref, A, b, G, y);
    ASSERT_TRUE(ok) << "trial " << trial;
    EXPECT_LT((A * y - b).lpNorm<Eigen::Infinity>(), 1e-7);
    EXPECT_GT((G * y).minCoeff(), -1e-7);
    const double obj = 0.5 * (y - y_ref).squaredNorm();
    EXPECT_NEAR(obj, oracle, 1e-5 * std::max(1.0, oracle)) << "trial " << trial;
  }
  ASSERT_GT(solved, 30);
}

// --- whole-body controller ----------------------------------------------------

struct WbcFixture {
  RobotModel model = default_robot_model(1.0);
  sim::PlanarDynamics dyn{model};
  sim::SimState state;
  ContactSpec all;

  WbcFixture() {
    const Eigen::VectorXd q0 = flat_foot_pose(model, 0.08);
    state = sim::make_standing_state(
        dyn, q0, base_height_for_ground_contact(model, q0));
    for (const auto& c : model.contacts) all.active_points.push_back(c.id);
  }

  std::vector<TaskSpec> hold_tasks() const {
    TaskSpec orient{TaskKind::kBodyOrientation, 1,
                    Eigen::VectorXd::Constant(1, state.coords(2)),
                    Eigen::VectorXd(), 40.0, 10.0};
    TaskSpec body{TaskKind::kBodyPosition, 2, state.coords.segment<2>(0),
                  Eigen::VectorXd(), 30.0, 8.0};
    TaskSpec posture{TaskKind::kJointPosture, 4, state.coords.tail(4),
                     Eigen::VectorXd(), 1.0, 0.0};
    return {orient, body, posture};
  }
};

TEST(WbcSolve, StaticConsistencyAtRest) {
  WbcFixture f;
  const WbcCommand cmd = wbc_solve(f.state, f.dyn, f.all, f.hold_tasks());
  ASSERT_TRUE(cmd.feasible);
  // Commands hold the posture...
  EXPECT_LT((cmd.q_cmd - f.state.coords.tail(4)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT(cmd.qd_cmd.cwiseAbs().maxCoeff(), 1e-10);
  // ...and the vertical forces carry exactly the weight.
  double fz = 0.0;
  for (const auto& fc : cmd.forces) fz += fc.y();
  EXPECT_NEAR(fz, f.model.total_mass * 9.81, 1e-6);
  // Friction cones hold on every point.
  for (const auto& fc : cmd.forces) {
    EXPECT_GE(fc.y(), -1e-9);
    EXPECT_LE(std::abs(fc.x()), f.all.mu * fc.y() + 1e-9);
  }
}

TEST(WbcSolve, ForwardTargetMovesCenterOfPressureForward) {
  WbcFixture f;
  auto tasks = f.hold_tasks();
  const WbcCommand before = wbc_solve(f.state, f.dyn, f.all, tasks);
  tasks[1].target(0) += 0.02;  // body target 2 cm forward
  const WbcCommand after = wbc_solve(f.state, f.dyn, f.all, tasks);
  ASSERT_TRUE(before.feasible);
  ASSERT_TRUE(after.feasible);
  const double cop_before = before.cop_x(f.dyn, f.state, f.all);
  const double cop_after = after.cop_x(f.dyn, f.state, f.all);
  EXPECT_GT(cop_after, cop_before + 1e-4);
  // The center of pressure stays inside the foot polygon.
  EXPECT_LE(cop_after, 0.081);
  EXPECT_GE(cop_after, -0.061);
}

TEST(WbcSolve, HeelRemovalLeavesOnlyToeForces) {
  WbcFixture f;
  // Shift the body over the toe footprint first so toe-only support is
  // statically feasible, then hold that state.
  ContactSpec toe_only;
  for (const auto& c : f.model.contacts) {
    if (c.group == ContactGroup::kToe) toe_only.active_points.push_back(c.id);
  }
  f.state.coords(0) = 0.05;  // base above the toe contacts
  auto tasks = f.hold_tasks();
  TaskSpec knee{TaskKind::kKneeJointPosition, 3,
                Eigen::VectorXd::Constant(1, f.state.coords(4)),
                Eigen::VectorXd(), 1.0, 0.0};
  tasks.push_back(knee);
  const WbcCommand cmd = wbc_solve(f.state, f.dyn, toe_only, tasks);
  ASSERT_TRUE(cmd.feasible) << cmd.message;
  ASSERT_EQ(cmd.forces.size(), 4u);  // four toe points, no heel entry
  double fz = 0.0;
  for (const auto& fc : cmd.forces) fz += fc.y();
  EXPECT_NEAR(fz, f.model.total_mass * 9.81, 1e-6);
}

TEST(WbcSolve, LowerPriorityTaskDoesNotDisturbHigherOnes) {
  WbcFixture f;
  // Displace targets so the tasks genuinely conflict.
  auto tasks = f.hold_tasks();
  tasks[0].target(0) += 0.05;
  tasks[1].target += Eigen::Vector2d(0.03, -0.02);
  tasks.resize(2);  // orientation + body position only

  const WbcCommand high_only = wbc_solve(f.state, f.dyn, f.all, tasks);

  TaskSpec posture{TaskKind::kJointPosture, 4,
                   f.state.coords.tail(4) +
                       0.3 * Eigen::VectorXd::Ones(4),
                   Eigen::VectorXd(), 1.0, 0.0};
  tasks.push_back(posture);
  const WbcCommand with_low = wbc_solve(f.state, f.dyn, f.all, tasks);

  // The joint command realizes the same high-priority task displacements.
  EXPECT_LT((high_only.q_cmd - with_low.q_cmd).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(WbcSolve, RejectsEmptyContactsAndDuplicatePriorities) {
  WbcFixture f;
  ContactSpec none;
  EXPECT_THROW(wbc_solve(f.state, f.dyn, none, f.hold_tasks()), ModelError);
  auto tasks = f.hold_tasks();
  tasks[1].priority = tasks[0].priority;
  EXPECT_THROW(wbc_solve(f.state, f.dyn, f.all, tasks), ModelError);
  EXPECT_THROW(wbc_solve(f.state, f.dyn, f.all, {}), ModelError);
}

// --- tiptoe plan ---------------------------------------------------------------

TEST(TiptoePlan, ThreePhasesWithHeelReleaseLast) {
  const RobotModel model = default_robot_model(1.0);
  const PhasePlan plan = tiptoe_plan(model, TiptoeTimings{});
  ASSERT_EQ(plan.phases.size(), 3u);
  EXPECT_EQ(plan.phases[0].contacts.active_points.size(), 5u);
  EXPECT_EQ(plan.phases[1].contacts.active_points.size(), 5u);
  EXPECT_EQ(plan.phases[2].contacts.active_points.size(), 4u);
  EXPECT_FALSE(plan.phases[0].knee_task);
  EXPECT_TRUE(plan.phases[2].knee_task);
  for (size_t i = 1; i < plan.phases.size(); ++i) {
    EXPECT_GT(plan.phases[i].t_end, plan.phases[i].t_start);
    EXPECT_DOUBLE_EQ(plan.phases[i].t_start, plan.phases[i - 1].t_end);
  }
  EXPECT_TRUE(plan.warning.empty());
}

TEST(TiptoePlan, ZeroShiftIsValidWithWarning) {
  const RobotModel model = default_robot_model(1.0);
  TiptoeTimings t;
  t.shift_duration = 0.0;
  const PhasePlan plan = tiptoe_plan(model, t);
  ASSERT_EQ(plan.phases.size(), 3u);
  EXPECT_FALSE(plan.warning.empty());
}

// --- jump tracker ---------------------------------------------------------------

TEST(JumpTracker, FeedsForwardAtReferenceAndHoldsBeyondEnd) {
  TrackedTrajectory traj;
  traj.dt = 0.01;
  traj.liftoff_time = 0.02;
  traj.q.resize(2, 3);
  traj.q << 0.0, 0.1, 0.2, 1.0, 1.1, 1.2;
  traj.qd = Eigen::MatrixXd::Zero(2, 3);
  traj.tau_ff.resize(2, 3);
  traj.tau_ff << 5, 5, 5, -3, -3, -3;

  ImpedanceGains g;
  g.kp = Eigen::VectorXd::Constant(2, 40.0);
  g.kd = Eigen::VectorXd::Constant(2, 1.5);
  const auto controller = jump_tracker(traj, g);

  sim::SimState s;
  s.coords = Eigen::VectorXd::Zero(5);
  s.vel = Eigen::VectorXd::Zero(5);
  s.t = 0.0;
  s.coords.tail(2) = traj.q.col(0);
  const Eigen::VectorXd tau = controller(s);
  EXPECT_NEAR(tau(0), 5.0, 1e-12);  // on-reference: pure feed-forward
  EXPECT_NEAR(tau(1), -3.0, 1e-12);

  // Past liftoff (and past the end): posture hold at the liftoff knot.
  s.t = 10.0;
  s.coords.tail(2) << 0.2, 1.2;
  const Eigen::VectorXd tau_end = controller(s);
  const Eigen::VectorXd expect =
      g.kp.cwiseProduct(traj.q.col(2) - s.coords.tail(2));
  EXPECT_NEAR(tau_end(0), expect(0), 1e-12);
  EXPECT_NEAR(tau_end(1), expect(1), 1e-12);
}

}  // namespace
}  // namespace uniped::control
