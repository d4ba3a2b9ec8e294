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

#ifndef UNIPED_TRAJOPT_RESIDUALS_HPP_
#define UNIPED_TRAJOPT_RESIDUALS_HPP_

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "uniped/trajopt/problem.hpp"

namespace uniped::trajopt {

/// Constraint blocks. Equality blocks are residuals (feasible at zero);
/// inequality blocks are margins (feasible when nonnegative).
struct ConstraintBlocks {
  Eigen::VectorXd dynamics;        // (1) x_{k+1} - step(x_k), 18 per interval
  Eigen::VectorXd kinematics;      // (2) FK_i(p,R,q) - r_i, 3 per contact-knot
  Eigen::VectorXd no_slip;         // (3) c_{ik} (r_{i,k+1} - r_{i,k})
  Eigen::VectorXd friction;        // (4) pyramid margins, 5 per contact-knot
  Eigen::VectorXd force_inactive;  // (5) (1 - c_{ik}) f_{ik}
  Eigen::VectorXd joint_limits;    // (6) [q - q_min; q_max - q] per knot
  Eigen::VectorXd torque;          // (7) [cap - tau; cap + tau] per knot

  /// Worst-case violation per block (abs for equalities, negative-part for
  /// inequalities) and overall.
  double max_violation() const;
  static const std::vector<std::string>& block_names();
  Eigen::VectorXd block_violations() const;  // per block, same order as names
};

/// Row counts / offsets of the stacked equality and inequality vectors.
struct ConstraintLayout {
  int N = 0, n = 0, nc = 0;
  int eq_dynamics() const { return 18 * (N - 1); }
  int eq_kinematics() const { return 3 * nc * N; }
  int eq_no_slip() const { return 3 * nc * (N - 1); }
  int eq_force_inactive() const { return 3 * nc * N; }
  int eq_total() const {
    return eq_dynamics() + eq_kinematics() + eq_no_slip() + eq_force_inactive();
  }
  int ineq_friction() const { return 5 * nc * N; }
  int ineq_joint_limits() const { return 2 * n * N; }
  int ineq_torque() const { return 2 * n * N; }
  int ineq_total() const {
    return ineq_friction() + ineq_joint_limits() + ineq_torque();
  }
};

/// Evaluates every constraint block at the given decision variables.
ConstraintBlocks eval_constraints(const JumpProblem& problem,
                                  const DecisionVariables& vars);

/// Solver-side evaluator with analytic gradients. Computes the tracking
/// cost, stacked equality/inequality residuals, and the gradient of
///   cost + we^T h(x) + wi^T g(x)
/// for arbitrary weight vectors (used for augmented-Lagrangian gradients
/// and for finite-difference verification).
class ResidualEvaluator {
 public:
  explicit ResidualEvaluator(const JumpProblem& problem);

  const ConstraintLayout& constraint_layout() const { return con_; }
  const VarLayout& var_layout() const { return vars_; }

  /// Residual pass. Either output may be null.
  void eval(const Eigen::VectorXd& x, double* cost, Eigen::VectorXd* eq,
            Eigen::VectorXd* ineq) const;

  /// Gradient pass: grad = d/dx [cost_weight * cost + we^T h + wi^T g].
  void accumulate_gradient(const Eigen::VectorXd& x, double cost_weight,
                           const Eigen::VectorXd& we, const Eigen::VectorXd& wi,
                           Eigen::VectorXd& grad) const;

  /// Splits stacked residuals into labeled blocks.
  ConstraintBlocks split(const Eigen::VectorXd& eq,
                         const Eigen::VectorXd& ineq) const;

 private:
  const JumpProblem& problem_;
  VarLayout vars_;
  ConstraintLayout con_;
  Eigen::Matrix3d inertia_;
  Eigen::Matrix3d inertia_inverse_;
  double mass_ = 0.0;
};

}  // namespace uniped::trajopt

#endif  // UNIPED_TRAJOPT_RESIDUALS_HPP_
