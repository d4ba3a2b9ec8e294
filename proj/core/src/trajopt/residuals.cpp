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

#include "uniped/trajopt/residuals.hpp"

#include <cmath>

#include "uniped/errors.hpp"
#include "uniped/so3.hpp"

namespace uniped::trajopt {
namespace {

// Row-major 3x3 view into the stacked variable vector.
Eigen::Matrix3d read_R(const Eigen::VectorXd& x, int base) {
  Eigen::Matrix3d R;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) R(r, c) = x(base + 3 * r + c);
  }
  return R;
}

void add_R(Eigen::VectorXd& g, int base, const Eigen::Matrix3d& m) {
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) g(base + 3 * r + c) += m(r, c);
  }
}

// Component index pairs of vee(0.5 (E - E^T)).
constexpr int kVeeA1[3] = {2, 0, 1};
constexpr int kVeeB1[3] = {1, 2, 0};

}  // namespace

const std::vector<std::string>& ConstraintBlocks::block_names() {
  static const std::vector<std::string> names = {
      "dynamics",       "kinematics",   "no_slip", "friction",
      "force_inactive", "joint_limits", "torque"};
  return names;
}

Eigen::VectorXd ConstraintBlocks::block_violations() const {
  auto eq_viol = [](const Eigen::VectorXd& v) {
    return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
  };
  auto ineq_viol = [](const Eigen::VectorXd& v) {
    return v.size() ? std::max(0.0, -v.minCoeff()) : 0.0;
  };
  Eigen::VectorXd out(7);
  out << eq_viol(dynamics), eq_viol(kinematics), eq_viol(no_slip),
      ineq_viol(friction), eq_viol(force_inactive), ineq_viol(joint_limits),
      ineq_viol(torque);
  return out;
}

double ConstraintBlocks::max_violation() const {
  return block_violations().maxCoeff();
}

ResidualEvaluator::ResidualEvaluator(const JumpProblem& problem)
    : problem_(problem) {
  vars_ = problem.layout();
  con_ = ConstraintLayout{vars_.N, vars_.n, vars_.nc};
  inertia_ = problem.model.composite_inertia;
  inertia_inverse_ = inertia_.inverse();
  mass_ = problem.model.total_mass;
}

void ResidualEvaluator::eval(const Eigen::VectorXd& x, double* cost,
                             Eigen::VectorXd* eq, Eigen::VectorXd* ineq) const {
  const int N = vars_.N, n = vars_.n, nc = vars_.nc;
  const double dt = problem_.schedule.dt;
  const double mu = problem_.mu;
  const Eigen::VectorXd q_lo = problem_.model.joint_lower();
  const Eigen::VectorXd q_hi = problem_.model.joint_upper();

  if (cost) *cost = 0.0;
  if (eq) eq->setZero(con_.eq_total());
  if (ineq) ineq->setZero(con_.ineq_total());

  const int off_dyn = 0;
  const int off_kin = con_.eq_dynamics();
  const int off_slip = off_kin + con_.eq_kinematics();
  const int off_inact = off_slip + con_.eq_no_slip();
  const int off_fric = 0;
  const int off_jlim = con_.ineq_friction();
  const int off_tau = off_jlim + con_.ineq_joint_limits();

  for (int k = 0; k < N; ++k) {
    const Eigen::Vector3d p = x.segment<3>(vars_.p(k));
    const Eigen::Matrix3d R = read_R(x, vars_.R(k));
    const Eigen::Vector3d v = x.segment<3>(vars_.v(k));
    const Eigen::Vector3d w = x.segment<3>(vars_.w(k));
    const Eigen::VectorXd q = x.segment(vars_.q(k), n);

    if (cost) {
      const KnotReference& ref = problem_.desired[k];
      Eigen::Matrix<double, 12, 1> e;
      e.segment<3>(0) = p - ref.p_des;
      const Eigen::Matrix3d E = ref.R_des.transpose() * R;
      e.segment<3>(3) = vee(0.5 * (E - E.transpose()));
      e.segment<3>(6) = v - ref.v_des;
      e.segment<3>(9) = w - ref.omega_des;
      *cost += e.dot(problem_.weights.asDiagonal() * e);
    }

    const auto kin = base_frame_kinematics(problem_.model, q, false);

    if (eq) {
      // (2) forward kinematics ties contact variables to the chain.
      for (int i = 0; i < nc; ++i) {
        const Eigen::Vector3d world = p + R * kin.position[i];
        eq->segment<3>(off_kin + 3 * (k * nc + i)) =
            world - x.segment<3>(vars_.r(k, i));
      }
      // (3) active contacts may not move between knots.
      if (k + 1 < N) {
        for (int i = 0; i < nc; ++i) {
          const double c = problem_.schedule.active(k, i) ? 1.0 : 0.0;
          eq->segment<3>(off_slip + 3 * (k * nc + i)) =
              c * (x.segment<3>(vars_.r(k + 1, i)) -
                   x.segment<3>(vars_.r(k, i)));
        }
      }
      // (5) inactive contacts carry no force.
      for (int i = 0; i < nc; ++i) {
        const double c = problem_.schedule.active(k, i) ? 1.0 : 0.0;
        eq->segment<3>(off_inact + 3 * (k * nc + i)) =
            (1.0 - c) * x.segment<3>(vars_.f(k, i));
      }
      // (1) discrete single-rigid-body dynamics.
      if (k + 1 < N) {
        SRBDState s;
        s.p = p;
        s.R = R;
        s.v = v;
        s.omega = w;
        ContactForceSet forces(nc);
        std::vector<Eigen::Vector3d> positions(nc);
        for (int i = 0; i < nc; ++i) {
          forces[i] = x.segment<3>(vars_.f(k, i));
          positions[i] = x.segment<3>(vars_.r(k, i));
        }
        const SRBDState pred =
            srbd_propagate_raw(s, forces, positions, mass_, inertia_, dt);
        Eigen::Ref<Eigen::VectorXd> row = eq->segment(off_dyn + 18 * k, 18);
        row.segment<3>(0) = x.segment<3>(vars_.p(k + 1)) - pred.p;
        for (int r = 0; r < 3; ++r) {
          for (int c = 0; c < 3; ++c) {
            row(3 + 3 * r + c) = x(vars_.R(k + 1) + 3 * r + c) - pred.R(r, c);
          }
        }
        row.segment<3>(12) = x.segment<3>(vars_.v(k + 1)) - pred.v;
        row.segment<3>(15) = x.segment<3>(vars_.w(k + 1)) - pred.omega;
      }
    }

    if (ineq) {
      // (4) friction pyramid, all contacts and knots.
      for (int i = 0; i < nc; ++i) {
        const Eigen::Vector3d f = x.segment<3>(vars_.f(k, i));
        Eigen::Ref<Eigen::VectorXd> rows =
            ineq->segment(off_fric + 5 * (k * nc + i), 5);
        rows(0) = mu * f.z() - f.x();
        rows(1) = mu * f.z() + f.x();
        rows(2) = mu * f.z() - f.y();
        rows(3) = mu * f.z() + f.y();
        rows(4) = f.z();
      }
      // (6) joint limits.
      for (int j = 0; j < n; ++j) {
        (*ineq)(off_jlim + 2 * n * k + j) = q(j) - q_lo(j);
        (*ineq)(off_jlim + 2 * n * k + n + j) = q_hi(j) - q(j);
      }
      // (7) GRF-based torque against the co-actuation capacity.
      Eigen::VectorXd tau = Eigen::VectorXd::Zero(n);
      for (int i = 0; i < nc; ++i) {
        const Eigen::Vector3d f_base =
            R.transpose() * x.segment<3>(vars_.f(k, i));
        tau -= kin.dpos_dq[i].transpose() * f_base;
      }
      const Eigen::VectorXd cap = problem_.capacity(q);
      for (int j = 0; j < n; ++j) {
        (*ineq)(off_tau + 2 * n * k + j) = cap(j) - tau(j);
        (*ineq)(off_tau + 2 * n * k + n + j) = cap(j) + tau(j);
      }
    }
  }
}

void ResidualEvaluator::accumulate_gradient(const Eigen::VectorXd& x,
                                            double cost_weight,
                                            const Eigen::VectorXd& we,
                                            const Eigen::VectorXd& wi,
                                            Eigen::VectorXd& grad) const {
  const int N = vars_.N, n = vars_.n, nc = vars_.nc;
  const double dt = problem_.schedule.dt;
  const double mu = problem_.mu;
  grad.setZero(vars_.total());

  const int off_kin = con_.eq_dynamics();
  const int off_slip = off_kin + con_.eq_kinematics();
  const int off_inact = off_slip + con_.eq_no_slip();
  const int off_jlim = con_.ineq_friction();
  const int off_tau = off_jlim + con_.ineq_joint_limits();

  for (int k = 0; k < N; ++k) {
    const Eigen::Vector3d p = x.segment<3>(vars_.p(k));
    const Eigen::Matrix3d R = read_R(x, vars_.R(k));
    const Eigen::Vector3d v = x.segment<3>(vars_.v(k));
    const Eigen::Vector3d w = x.segment<3>(vars_.w(k));
    const Eigen::VectorXd q = x.segment(vars_.q(k), n);
    const auto kin = base_frame_kinematics(problem_.model, q, true);

    // --- tracking cost ---
    if (cost_weight != 0.0) {
      const KnotReference& ref = problem_.desired[k];
      const Eigen::Matrix3d E = ref.R_des.transpose() * R;
      Eigen::Matrix<double, 12, 1> e;
      e.segment<3>(0) = p - ref.p_des;
      e.segment<3>(3) = vee(0.5 * (E - E.transpose()));
      e.segment<3>(6) = v - ref.v_des;
      e.segment<3>(9) = w - ref.omega_des;
      const Eigen::Matrix<double, 12, 1> ge =
          2.0 * cost_weight * problem_.weights.cwiseProduct(e);
      grad.segment<3>(vars_.p(k)) += ge.segment<3>(0);
      grad.segment<3>(vars_.v(k)) += ge.segment<3>(6);
      grad.segment<3>(vars_.w(k)) += ge.segment<3>(9);
      Eigen::Matrix3d bar_R = Eigen::Matrix3d::Zero();
      for (int m = 0; m < 3; ++m) {
        const int a1 = kVeeA1[m], b1 = kVeeB1[m];
        // e_R[m] = 0.5 (E(a1,b1) - E(b1,a1)), E = R_des^T R.
        for (int c = 0; c < 3; ++c) {
          bar_R(c, b1) += 0.5 * ge(3 + m) * ref.R_des(c, a1);
          bar_R(c, a1) -= 0.5 * ge(3 + m) * ref.R_des(c, b1);
        }
      }
      add_R(grad, vars_.R(k), bar_R);
    }

    // --- (2) kinematics ---
    for (int i = 0; i < nc; ++i) {
      const Eigen::Vector3d w3 = we.segment<3>(off_kin + 3 * (k * nc + i));
      grad.segment<3>(vars_.p(k)) += w3;
      grad.segment<3>(vars_.r(k, i)) -= w3;
      add_R(grad, vars_.R(k), w3 * kin.position[i].transpose());
      grad.segment(vars_.q(k), n) +=
          kin.dpos_dq[i].transpose() * (R.transpose() * w3);
    }

    // --- (3) no slip ---
    if (k + 1 < N) {
      for (int i = 0; i < nc; ++i) {
        if (!problem_.schedule.active(k, i)) continue;
        const Eigen::Vector3d w3 = we.segment<3>(off_slip + 3 * (k * nc + i));
        grad.segment<3>(vars_.r(k + 1, i)) += w3;
        grad.segment<3>(vars_.r(k, i)) -= w3;
      }
    }

    // --- (5) inactive contact force ---
    for (int i = 0; i < nc; ++i) {
      if (problem_.schedule.active(k, i)) continue;
      grad.segment<3>(vars_.f(k, i)) +=
          we.segment<3>(off_inact + 3 * (k * nc + i));
    }

    // --- (4) friction pyramid ---
    for (int i = 0; i < nc; ++i) {
      const auto w5 = wi.segment<5>(5 * (k * nc + i));
      Eigen::Vector3d gf;
      gf.x() = -w5(0) + w5(1);
      gf.y() = -w5(2) + w5(3);
      gf.z() = mu * (w5(0) + w5(1) + w5(2) + w5(3)) + w5(4);
      grad.segment<3>(vars_.f(k, i)) += gf;
    }

    // --- (6) joint limits ---
    for (int j = 0; j < n; ++j) {
      grad(vars_.q(k) + j) +=
          wi(off_jlim + 2 * n * k + j) - wi(off_jlim + 2 * n * k + n + j);
    }

    // --- (7) torque capacity ---
    {
      // Weights: a_j on cap - tau, b_j on cap + tau.
      Eigen::VectorXd a(n), b(n);
      for (int j = 0; j < n; ++j) {
        a(j) = wi(off_tau + 2 * n * k + j);
        b(j) = wi(off_tau + 2 * n * k + n + j);
      }
      const Eigen::VectorXd sum_ab = a + b;
      const Eigen::VectorXd diff_ba = b - a;

      // Capacity gradient (zero for overridden joints).
      if ((sum_ab.array() != 0.0).any()) {
        for (int l = 0; l < n; ++l) {
          const Eigen::MatrixXd dJ =
              problem_.model.drivetrain.eval_derivative(q, l);
          double acc = 0.0;
          for (int j = 0; j < n; ++j) {
            if (problem_.capacity_override.size() == n &&
                !std::isnan(problem_.capacity_override(j))) {
              continue;
            }
            acc += sum_ab(j) *
                   (dJ.col(j).dot(problem_.model.drivetrain.motor_torque_max));
          }
          grad(vars_.q(k) + l) += acc;
        }
      }

      // Torque gradient.
      Eigen::Matrix3d bar_R = Eigen::Matrix3d::Zero();
      for (int i = 0; i < nc; ++i) {
        const Eigen::Vector3d f = x.segment<3>(vars_.f(k, i));
        const Eigen::Vector3d f_base = R.transpose() * f;
        // d tau_j / d q_l = -d2pos[j,l] . f_base
        for (int l = 0; l < n; ++l) {
          double acc = 0.0;
          for (int j = 0; j < n; ++j) {
            acc += diff_ba(j) * (-kin.d2pos_dqdq[i][j * n + l].dot(f_base));
          }
          grad(vars_.q(k) + l) += acc;
        }
        // d tau_j / d f_i = -R dpos[:,j]
        const Eigen::Vector3d svec = kin.dpos_dq[i] * diff_ba;
        grad.segment<3>(vars_.f(k, i)) -= R * svec;
        // d tau_j / d R(a,b) = -f[a] dpos(b,j)
        bar_R -= f * svec.transpose();
      }
      add_R(grad, vars_.R(k), bar_R);
    }

    // --- (1) dynamics adjoint ---
    if (k + 1 < N) {
      const auto w18 = we.segment<18>(18 * k);
      const Eigen::Vector3d wp = w18.segment<3>(0);
      Eigen::Matrix3d WR;
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) WR(r, c) = w18(3 + 3 * r + c);
      }
      const Eigen::Vector3d wv = w18.segment<3>(12);
      const Eigen::Vector3d ww = w18.segment<3>(15);

      // Direct +w on the k+1 state.
      grad.segment<3>(vars_.p(k + 1)) += wp;
      add_R(grad, vars_.R(k + 1), WR);
      grad.segment<3>(vars_.v(k + 1)) += wv;
      grad.segment<3>(vars_.w(k + 1)) += ww;

      // Forward quantities of the step.
      Eigen::Vector3d total_force = Eigen::Vector3d::Zero();
      Eigen::Vector3d tau_w = Eigen::Vector3d::Zero();
      std::vector<Eigen::Vector3d> fs(nc), rs(nc);
      for (int i = 0; i < nc; ++i) {
        fs[i] = x.segment<3>(vars_.f(k, i));
        rs[i] = x.segment<3>(vars_.r(k, i));
        total_force += fs[i];
        tau_w += (rs[i] - p).cross(fs[i]);
      }
      const Eigen::Vector3d tau_b = R.transpose() * tau_w;
      const Eigen::Vector3d omega_plus =
          w + dt * (inertia_inverse_ *
                    (tau_b - w.cross(inertia_ * w)));
      const Eigen::Matrix3d E = exp_map(dt * omega_plus);

      // Adjoints (cotangents of -step contribution).
      const Eigen::Vector3d bar_v_plus = wv + dt * wp;
      const Eigen::Matrix3d bar_E = R.transpose() * WR;
      Eigen::Matrix3d bar_R = WR * E.transpose();  // direct R factor

      const Eigen::Matrix<double, 9, 3> dE =
          exp_map_jacobian(dt * omega_plus) * dt;
      Eigen::Vector3d bar_w_plus = ww;
      for (int j = 0; j < 3; ++j) {
        double acc = 0.0;
        for (int r = 0; r < 3; ++r) {
          for (int c = 0; c < 3; ++c) acc += bar_E(r, c) * dE(3 * r + c, j);
        }
        bar_w_plus(j) += acc;
      }

      const Eigen::Vector3d bar_tau_b = dt * (inertia_inverse_ * bar_w_plus);
      const Eigen::Matrix3d gyro =
          skew(w) * inertia_ - skew(inertia_ * w);
      const Eigen::Vector3d bar_w =
          bar_w_plus -
          dt * gyro.transpose() * (inertia_inverse_ * bar_w_plus);

      const Eigen::Vector3d bar_tau_w = R * bar_tau_b;
      bar_R += tau_w * bar_tau_b.transpose();

      Eigen::Vector3d bar_p = wp;
      for (int i = 0; i < nc; ++i) {
        const Eigen::Vector3d bar_r = fs[i].cross(bar_tau_w);
        const Eigen::Vector3d bar_f =
            -(rs[i] - p).cross(bar_tau_w) + (dt / mass_) * bar_v_plus;
        grad.segment<3>(vars_.r(k, i)) -= bar_r;
        grad.segment<3>(vars_.f(k, i)) -= bar_f;
        bar_p -= fs[i].cross(bar_tau_w);
      }
      const Eigen::Vector3d bar_v = bar_v_plus;

      grad.segment<3>(vars_.p(k)) -= bar_p;
      add_R(grad, vars_.R(k), -bar_R);
      grad.segment<3>(vars_.v(k)) -= bar_v;
      grad.segment<3>(vars_.w(k)) -= bar_w;
    }
  }
}

ConstraintBlocks ResidualEvaluator::split(const Eigen::VectorXd& eq,
                                          const Eigen::VectorXd& ineq) const {
  ConstraintBlocks b;
  int off = 0;
  b.dynamics = eq.segment(off, con_.eq_dynamics());
  off += con_.eq_dynamics();
  b.kinematics = eq.segment(off, con_.eq_kinematics());
  off += con_.eq_kinematics();
  b.no_slip = eq.segment(off, con_.eq_no_slip());
  off += con_.eq_no_slip();
  b.force_inactive = eq.segment(off, con_.eq_force_inactive());

  off = 0;
  b.friction = ineq.segment(off, con_.ineq_friction());
  off += con_.ineq_friction();
  b.joint_limits = ineq.segment(off, con_.ineq_joint_limits());
  off += con_.ineq_joint_limits();
  b.torque = ineq.segment(off, con_.ineq_torque());
  return b;
}

ConstraintBlocks eval_constraints(const JumpProblem& problem,
                                  const DecisionVariables& vars) {
  ResidualEvaluator ev(problem);
  Eigen::VectorXd eq, ineq;
  ev.eval(vars.x, nullptr, &eq, &ineq);
  return ev.split(eq, ineq);
}

}  // namespace uniped::trajopt
