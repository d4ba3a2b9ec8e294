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

#ifndef UNIPED_TRAJOPT_SOLVER_HPP_
#define UNIPED_TRAJOPT_SOLVER_HPP_

#include <Eigen/Dense>
#include <string>

#include "uniped/trajopt/problem.hpp"
#include "uniped/trajopt/residuals.hpp"

namespace uniped::trajopt {

struct SolverConfig {
  int max_outer = 60;
  int max_inner_per_outer = 600;
  double tol_violation = 1e-4;  // max constraint violation, scaled units
  double tol_grad = 1e-5;       // augmented-Lagrangian gradient infinity norm
  double rho_init = 10.0;
  double rho_growth = 10.0;
  double rho_max = 1e9;
  int lbfgs_memory = 20;
  uint64_t seed = 0;  // reserved; the solve itself is deterministic
  bool verbose = false;
};

enum class SolveStatus {
  kConverged,     // violation and gradient tolerances met
  kIterationCap,  // cap hit with violation <= 1e-2 (usable, reported)
  kFailed,        // cap hit with violation > 1e-2
};

struct SolverReport {
  SolveStatus status = SolveStatus::kFailed;
  int outer_iterations = 0;
  int inner_iterations = 0;
  double final_cost = 0.0;
  double final_merit = 0.0;
  double gradient_norm = 0.0;
  /// Independently validated worst violation (not the solver's own number).
  double max_violation = 0.0;
  std::string message;
};

struct JumpSolution {
  DecisionVariables vars;
  Eigen::MatrixXd joint_torques;  // n x N, GRF-based estimates per knot
  SolverReport report;
};

/// Augmented-Lagrangian outer loop with an L-BFGS inner minimization over
/// the stacked decision variables. Deterministic for a fixed problem and
/// configuration.
JumpSolution solve(const JumpProblem& problem, const SolverConfig& config = {});

}  // namespace uniped::trajopt

#endif  // UNIPED_TRAJOPT_SOLVER_HPP_
