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

#include "uniped/sim/dynamics.hpp"

#include <cmath>

#include "uniped/errors.hpp"

namespace uniped::sim {
namespace {

// Planar rotation matching the 3D rotation about +y: (x, z) components of
// R_y(angle) applied to in-plane vectors.
Eigen::Matrix2d rot(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Eigen::Matrix2d m;
  m << c, s, -s, c;
  return m;
}

// d rot / d angle = D * rot with D = [[0, 1], [-1, 0]].
Eigen::Vector2d perp(const Eigen::Vector2d& u) {
  return Eigen::Vector2d(u.y(), -u.x());
}

}  // namespace

PlanarDynamics::PlanarDynamics(const RobotModel& model, bool fixed_base)
    : model_(&model), fixed_base_(fixed_base) {
  if (!model.planar) {
    throw ModelError("PlanarDynamics requires a planar model");
  }
  n_ = model.joint_count();
  for (int j = 0; j < n_; ++j) {
    if ((model.joints[j].axis - Eigen::Vector3d::UnitY()).norm() > 1e-12) {
      throw ModelError("planar simulation requires all joint axes = +y");
    }
  }
  for (size_t l = 0; l < model.links.size(); ++l) {
    Body b;
    b.mass = model.links[l].mass;
    if (l == 0) b.mass += model.base_mass_extra;
    b.inertia_yy = model.links[l].inertia_about_com(1, 1);
    b.length = model.links[l].length;
    b.com_offset = model.links[l].com_offset;
    bodies_.push_back(b);
    total_mass_ += b.mass;
  }
  reflected_inertia_.resize(n_);
  for (int m2 = 0; m2 < n_; ++m2) {
    const ActuatorParams& act = model.actuators[m2];
    reflected_inertia_(m2) =
        act.rotor_inertia * act.internal_gear_ratio * act.internal_gear_ratio;
  }
  for (const auto& c : model.contacts) {
    if (std::abs(c.offset.y()) > 1e-12) {
      throw ModelError("planar simulation requires contact offsets with y = 0");
    }
    contact_link_.push_back(c.parent_link);
    contact_local_.push_back(Eigen::Vector2d(c.offset.x(), c.offset.z()));
  }
}

PlanarDynamics::Frames PlanarDynamics::frames(
    const Eigen::VectorXd& coords) const {
  Frames fr;
  const int links = static_cast<int>(bodies_.size());
  fr.origin.resize(links);
  fr.angle.resize(links);
  fr.origin[0] = coords.segment<2>(0);
  fr.angle[0] = coords(2);
  for (int j = 0; j < n_; ++j) {
    fr.origin[j + 1] =
        fr.origin[j] + rot(fr.angle[j]) * Eigen::Vector2d(0, -bodies_[j].length);
    fr.angle[j + 1] = fr.angle[j] + coords(3 + j);
  }
  return fr;
}

Eigen::Vector2d PlanarDynamics::point_position(
    const Frames& fr, int link, const Eigen::Vector2d& local) const {
  return fr.origin[link] + rot(fr.angle[link]) * local;
}

Eigen::MatrixXd PlanarDynamics::point_jacobian(
    const Frames& fr, int link, const Eigen::Vector2d& local) const {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2, dof());
  const Eigen::Vector2d p = point_position(fr, link, local);
  J.col(0) = Eigen::Vector2d(1, 0);
  J.col(1) = Eigen::Vector2d(0, 1);
  J.col(2) = perp(p - fr.origin[0]);
  for (int j = 0; j < n_ && j < link; ++j) {
    J.col(3 + j) = perp(p - fr.origin[j + 1]);
  }
  return J;
}

Eigen::Vector2d PlanarDynamics::point_bias_accel(
    const Frames& fr, int link, const Eigen::Vector2d& local,
    const Eigen::VectorXd& vel) const {
  // Sum of -angle_rate^2 * segment over the chain to the point.
  Eigen::Vector2d acc = Eigen::Vector2d::Zero();
  double rate = vel(2);
  for (int j = 0; j < link; ++j) {
    const Eigen::Vector2d seg =
        rot(fr.angle[j]) * Eigen::Vector2d(0, -bodies_[j].length);
    acc -= rate * rate * seg;
    rate += vel(3 + j);
  }
  acc -= rate * rate * (rot(fr.angle[link]) * local);
  return acc;
}

std::vector<PlanarDynamics::PointKinematics> PlanarDynamics::contact_kinematics(
    const Eigen::VectorXd& coords, const Eigen::VectorXd& vel) const {
  const Frames fr = frames(coords);
  std::vector<PointKinematics> out(contact_count());
  for (int i = 0; i < contact_count(); ++i) {
    PointKinematics& k = out[i];
    k.jacobian = point_jacobian(fr, contact_link_[i], contact_local_[i]);
    k.pos = point_position(fr, contact_link_[i], contact_local_[i]);
    k.vel = k.jacobian * vel;
  }
  return out;
}

void PlanarDynamics::add_drivetrain_inertia(const Eigen::VectorXd& q,
                                             Eigen::MatrixXd& M_joints) const {
  if (reflected_inertia_.isZero(0.0)) return;
  const Eigen::MatrixXd J = model_->drivetrain.eval(q);
  M_joints += J.transpose() * reflected_inertia_.asDiagonal() * J;
}

Eigen::VectorXd PlanarDynamics::drivetrain_bias(const Eigen::VectorXd& q,
                                                const Eigen::VectorXd& qd) const {
  // Velocity-product terms of T = 1/2 sum_m I_m (J_theta(q) qd)_m^2.
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n_);
  if (reflected_inertia_.isZero(0.0)) return b;
  const Eigen::MatrixXd J = model_->drivetrain.eval(q);
  const Eigen::VectorXd motor_rate = J * qd;
  Eigen::MatrixXd Jdot = Eigen::MatrixXd::Zero(n_, n_);
  std::vector<Eigen::MatrixXd> dJ(n_);
  for (int d = 0; d < n_; ++d) {
    dJ[d] = model_->drivetrain.eval_derivative(q, d);
    Jdot += dJ[d] * qd(d);
  }
  const Eigen::VectorXd motor_acc_bias = Jdot * qd;
  for (int l = 0; l < n_; ++l) {
    double acc = 0.0;
    for (int m = 0; m < n_; ++m) {
      acc += reflected_inertia_(m) *
             (motor_acc_bias(m) * J(m, l) + motor_rate(m) * Jdot(m, l));
      acc -= reflected_inertia_(m) * motor_rate(m) * (dJ[l].row(m) * qd)(0);
    }
    b(l) = acc;
  }
  return b;
}

Eigen::MatrixXd PlanarDynamics::mass_matrix(
    const Eigen::VectorXd& coords) const {
  const Frames fr = frames(coords);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dof(), dof());
  for (size_t l = 0; l < bodies_.size(); ++l) {
    const Eigen::Vector2d local(0, -bodies_[l].com_offset);
    const Eigen::MatrixXd Jv = point_jacobian(fr, static_cast<int>(l), local);
    M += bodies_[l].mass * Jv.transpose() * Jv;
    // Angular rows: pitch plus every joint above the link.
    Eigen::VectorXd Jw = Eigen::VectorXd::Zero(dof());
    Jw(2) = 1.0;
    for (int j = 0; j < static_cast<int>(l); ++j) Jw(3 + j) = 1.0;
    M += bodies_[l].inertia_yy * Jw * Jw.transpose();
  }
  Eigen::MatrixXd M_joints = M.bottomRightCorner(n_, n_);
  add_drivetrain_inertia(coords.tail(n_), M_joints);
  M.bottomRightCorner(n_, n_) = M_joints;
  return M;
}

Eigen::VectorXd PlanarDynamics::bias(const Eigen::VectorXd& coords,
                                     const Eigen::VectorXd& vel) const {
  const Frames fr = frames(coords);
  const Eigen::Vector2d g(0.0, -9.81);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dof());
  for (size_t l = 0; l < bodies_.size(); ++l) {
    const Eigen::Vector2d local(0, -bodies_[l].com_offset);
    const Eigen::MatrixXd Jv = point_jacobian(fr, static_cast<int>(l), local);
    const Eigen::Vector2d acc =
        point_bias_accel(fr, static_cast<int>(l), local, vel);
    b += bodies_[l].mass * Jv.transpose() * (acc - g);
  }
  b.tail(n_) += drivetrain_bias(coords.tail(n_), vel.tail(n_));
  return b;
}

Eigen::VectorXd PlanarDynamics::gravity(const Eigen::VectorXd& coords) const {
  return bias(coords, Eigen::VectorXd::Zero(dof()));
}

double PlanarDynamics::total_energy(const Eigen::VectorXd& coords,
                                    const Eigen::VectorXd& vel) const {
  const Frames fr = frames(coords);
  double kinetic = 0.0, potential = 0.0;
  for (size_t l = 0; l < bodies_.size(); ++l) {
    const Eigen::Vector2d local(0, -bodies_[l].com_offset);
    const Eigen::MatrixXd Jv = point_jacobian(fr, static_cast<int>(l), local);
    const Eigen::Vector2d v = Jv * vel;
    double rate = vel(2);
    for (int j = 0; j < static_cast<int>(l); ++j) rate += vel(3 + j);
    kinetic += 0.5 * bodies_[l].mass * v.squaredNorm() +
               0.5 * bodies_[l].inertia_yy * rate * rate;
    potential += bodies_[l].mass * 9.81 *
                 point_position(fr, static_cast<int>(l), local).y();
  }
  if (!reflected_inertia_.isZero(0.0)) {
    const Eigen::VectorXd motor_rate =
        model_->drivetrain.eval(coords.tail(n_)) * vel.tail(n_);
    kinetic += 0.5 * motor_rate.dot(reflected_inertia_.asDiagonal() * motor_rate);
  }
  return kinetic + potential;
}

Eigen::Vector2d PlanarDynamics::com(const Eigen::VectorXd& coords,
                                    Eigen::MatrixXd* jacobian) const {
  const Frames fr = frames(coords);
  Eigen::Vector2d weighted = Eigen::Vector2d::Zero();
  if (jacobian) jacobian->setZero(2, dof());
  for (size_t l = 0; l < bodies_.size(); ++l) {
    const Eigen::Vector2d local(0, -bodies_[l].com_offset);
    weighted +=
        bodies_[l].mass * point_position(fr, static_cast<int>(l), local);
    if (jacobian) {
      *jacobian += bodies_[l].mass *
                   point_jacobian(fr, static_cast<int>(l), local) /
                   total_mass_;
    }
  }
  return weighted / total_mass_;
}

}  // namespace uniped::sim
