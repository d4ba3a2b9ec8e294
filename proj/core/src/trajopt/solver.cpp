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

#include "uniped/trajopt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>

#include "uniped/trajopt/validator.hpp"

namespace uniped::trajopt {
namespace {

double violation(const Eigen::VectorXd& eq, const Eigen::VectorXd& ineq) {
  double v = eq.size() ? eq.cwiseAbs().maxCoeff() : 0.0;
  if (ineq.size()) v = std::max(v, std::max(0.0, -ineq.minCoeff()));
  return v;
}

/// Powell-Hestenes-Rockafellar augmented Lagrangian value.
double phi_value(double cost, const Eigen::VectorXd& eq,
                 const Eigen::VectorXd& ineq, const Eigen::VectorXd& lam_eq,
                 const Eigen::VectorXd& lam_in, double rho) {
  double phi = cost;
  for (int i = 0; i < eq.size(); ++i) {
    phi += lam_eq(i) * eq(i) + 0.5 * rho * eq(i) * eq(i);
  }
  for (int i = 0; i < ineq.size(); ++i) {
    const double t = std::max(0.0, lam_in(i) - rho * ineq(i));
    phi += (t * t - lam_in(i) * lam_in(i)) / (2.0 * rho);
  }
  return phi;
}

void phi_weights(const Eigen::VectorXd& eq, const Eigen::VectorXd& ineq,
                 const Eigen::VectorXd& lam_eq, const Eigen::VectorXd& lam_in,
                 double rho, Eigen::VectorXd& we, Eigen::VectorXd& wi) {
  we = lam_eq + rho * eq;
  wi.resize(ineq.size());
  for (int i = 0; i < ineq.size(); ++i) {
    wi(i) = -std::max(0.0, lam_in(i) - rho * ineq(i));
  }
}

struct LbfgsHistory {
  std::deque<Eigen::VectorXd> s, y;
  std::deque<double> rho;
  int memory = 15;

  void clear() {
    s.clear();
    y.clear();
    rho.clear();
  }
  void push(const Eigen::VectorXd& si, const Eigen::VectorXd& yi) {
    const double sy = si.dot(yi);
    if (sy <= 1e-12 * si.norm() * yi.norm()) return;  // skip bad curvature
    s.push_back(si);
    y.push_back(yi);
    rho.push_back(1.0 / sy);
    if (static_cast<int>(s.size()) > memory) {
      s.pop_front();
      y.pop_front();
      rho.pop_front();
    }
  }
  Eigen::VectorXd direction(const Eigen::VectorXd& grad) const {
    Eigen::VectorXd q = -grad;
    const int m = static_cast<int>(s.size());
    if (m == 0) return q;
    std::vector<double> alpha(m);
    for (int i = m - 1; i >= 0; --i) {
      alpha[i] = rho[i] * s[i].dot(q);
      q -= alpha[i] * y[i];
    }
    const double gamma = s.back().dot(y.back()) / y.back().squaredNorm();
    q *= gamma;
    for (int i = 0; i < m; ++i) {
      const double beta = rho[i] * y[i].dot(q);
      q += (alpha[i] - beta) * s[i];
    }
    return q;
  }
};

}  // namespace

JumpSolution solve(const JumpProblem& problem, const SolverConfig& config) {
  ResidualEvaluator ev(problem);
  const int nx = ev.var_layout().total();

  Eigen::VectorXd x = problem.initial_guess.x;
  if (x.size() != nx) x = Eigen::VectorXd::Zero(nx);

  Eigen::VectorXd lam_eq = Eigen::VectorXd::Zero(ev.constraint_layout().eq_total());
  Eigen::VectorXd lam_in =
      Eigen::VectorXd::Zero(ev.constraint_layout().ineq_total());
  double rho = config.rho_init;

  Eigen::VectorXd eq, ineq, we, wi, grad(nx);
  double cost = 0.0;

  auto eval_point = [&](const Eigen::VectorXd& xp, double& c,
                        Eigen::VectorXd& e, Eigen::VectorXd& g) {
    ev.eval(xp, &c, &e, &g);
  };

  eval_point(x, cost, eq, ineq);
  double viol = violation(eq, ineq);
  double best_viol = viol;
  double grad_inf = std::numeric_limits<double>::infinity();

  int total_inner = 0;
  int outer = 0;
  double inner_tol = std::max(config.tol_grad, 1e-1);
  bool converged = false;
  double plateau_best_grad = std::numeric_limits<double>::infinity();
  int plateau_count = 0;

  for (outer = 0; outer < config.max_outer; ++outer) {
    // --- inner minimization of the augmented Lagrangian ---
    LbfgsHistory hist;
    hist.memory = config.lbfgs_memory;

    phi_weights(eq, ineq, lam_eq, lam_in, rho, we, wi);
    double phi = phi_value(cost, eq, ineq, lam_eq, lam_in, rho);
    ev.accumulate_gradient(x, 1.0, we, wi, grad);
    grad_inf = grad.lpNorm<Eigen::Infinity>();

    Eigen::VectorXd x_trial, eq_t, ineq_t;
    for (int inner = 0; inner < config.max_inner_per_outer; ++inner) {
      if (grad_inf <= inner_tol) break;
      ++total_inner;

      Eigen::VectorXd dir = hist.direction(grad);
      double gd = grad.dot(dir);
      if (gd > -1e-16 * grad.norm() * dir.norm()) {
        hist.clear();
        dir = -grad;
        gd = -grad.squaredNorm();
      }

      // Backtracking Armijo line search with quadratic interpolation
      // (phi-only evaluations).
      double step = hist.s.empty() ? std::min(1.0, 1.0 / grad_inf) : 1.0;
      double phi_trial = 0.0, cost_trial = 0.0;
      bool accepted = false;
      for (int ls = 0; ls < 50; ++ls) {
        x_trial = x + step * dir;
        eval_point(x_trial, cost_trial, eq_t, ineq_t);
        phi_trial = phi_value(cost_trial, eq_t, ineq_t, lam_eq, lam_in, rho);
        if (phi_trial <= phi + 1e-4 * step * gd) {
          accepted = true;
          break;
        }
        // Minimizer of the quadratic through phi(0), phi'(0), phi(step),
        // safeguarded into [0.1, 0.5] of the current step.
        const double denom = phi_trial - phi - step * gd;
        double next = denom > 0 ? -0.5 * gd * step * step / denom : 0.5 * step;
        next = std::clamp(next, 0.1 * step, 0.5 * step);
        step = next;
      }
      if (!accepted) {
        // No decrease even with a tiny step along steepest descent: stall.
        if (hist.s.empty()) break;
        hist.clear();
        continue;
      }

      phi_weights(eq_t, ineq_t, lam_eq, lam_in, rho, we, wi);
      Eigen::VectorXd grad_new(nx);
      ev.accumulate_gradient(x_trial, 1.0, we, wi, grad_new);

      hist.push(step * dir, grad_new - grad);
      x.swap(x_trial);
      eq.swap(eq_t);
      ineq.swap(ineq_t);
      cost = cost_trial;
      phi = phi_trial;
      grad.swap(grad_new);
      grad_inf = grad.lpNorm<Eigen::Infinity>();
    }

    viol = violation(eq, ineq);
    if (config.verbose) {
      std::printf(
          "outer %3d rho %.1e viol %.3e grad %.3e cost %.6e inner %d\n", outer,
          rho, viol, grad_inf, cost, total_inner);
    }

    if (viol <= config.tol_violation && grad_inf <= config.tol_grad) {
      converged = true;
      ++outer;
      break;
    }

    // Once feasible, stop early if the stationarity measure has stopped
    // improving; the cap is reported, never silently accepted.
    if (viol <= config.tol_violation) {
      if (grad_inf > 0.5 * plateau_best_grad) {
        if (++plateau_count >= 6) {
          ++outer;
          break;
        }
      } else {
        plateau_count = 0;
      }
      plateau_best_grad = std::min(plateau_best_grad, grad_inf);
    }

    // Multiplier update on feasibility progress, penalty growth otherwise.
    if (viol <= std::max(0.25 * best_viol, config.tol_violation)) {
      lam_eq += rho * eq;
      for (int i = 0; i < ineq.size(); ++i) {
        lam_in(i) = std::max(0.0, lam_in(i) - rho * ineq(i));
      }
      best_viol = std::min(best_viol, viol);
    } else {
      rho = std::min(rho * config.rho_growth, config.rho_max);
    }
    inner_tol = std::max(config.tol_grad, inner_tol * 0.3);
  }

  JumpSolution sol;
  sol.vars = DecisionVariables(ev.var_layout());
  sol.vars.x = x;

  const int N = ev.var_layout().N;
  const int n = ev.var_layout().n;
  sol.joint_torques.resize(n, N);
  for (int k = 0; k < N; ++k) {
    std::vector<Eigen::Vector3d> fs(problem.model.contact_count());
    for (int i = 0; i < problem.model.contact_count(); ++i) {
      fs[i] = sol.vars.f(k, i);
    }
    sol.joint_torques.col(k) =
        torque_estimate(problem.model, sol.vars.q(k), sol.vars.R(k), fs);
  }

  // The reported violation comes from the independent validator.
  const ViolationReport report = validate_solution(problem, sol.vars);
  sol.report.max_violation = report.max_violation;
  sol.report.outer_iterations = outer;
  sol.report.inner_iterations = total_inner;
  sol.report.final_cost = cost;
  sol.report.final_merit = phi_value(cost, eq, ineq, lam_eq, lam_in, rho);
  sol.report.gradient_norm = grad_inf;
  if (converged && sol.report.max_violation <= 10 * config.tol_violation) {
    sol.report.status = SolveStatus::kConverged;
    sol.report.message = "converged";
  } else if (sol.report.max_violation <= 1e-2) {
    sol.report.status = SolveStatus::kIterationCap;
    sol.report.message = "iteration cap reached; solution usable";
  } else {
    sol.report.status = SolveStatus::kFailed;
    sol.report.message = "iteration cap reached with violation above 1e-2";
  }
  return sol;
}

}  // namespace uniped::trajopt
