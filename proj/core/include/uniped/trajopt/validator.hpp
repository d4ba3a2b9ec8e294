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

#ifndef UNIPED_TRAJOPT_VALIDATOR_HPP_
#define UNIPED_TRAJOPT_VALIDATOR_HPP_

#include <string>
#include <vector>

#include "uniped/trajopt/residuals.hpp"

namespace uniped::trajopt {

struct BlockViolation {
  std::string name;
  double max_abs = 0.0;
  double mean_abs = 0.0;
  int argmax_knot = -1;
  int argmax_contact = -1;  // -1 where not applicable
};

struct ViolationReport {
  std::vector<BlockViolation> blocks;
  double max_violation = 0.0;
  double knee_torque_peak = 0.0;       // max |tau_knee| over knots
  int knee_torque_peak_knot = -1;
  double cost = 0.0;

  const BlockViolation& block(const std::string& name) const;
};

/// Independent re-evaluation of all constraint blocks, written directly from
/// the constraint definitions with plain loops. Shares no code with the
/// solver's residual evaluator. The blocks it produces must agree with
/// eval_constraints to numerical roundoff.
ConstraintBlocks reference_constraints(const JumpProblem& problem,
                                       const DecisionVariables& vars);

/// Violation summary built from reference_constraints plus torque statistics.
ViolationReport validate_solution(const JumpProblem& problem,
                                  const DecisionVariables& vars);

}  // namespace uniped::trajopt

#endif  // UNIPED_TRAJOPT_VALIDATOR_HPP_
