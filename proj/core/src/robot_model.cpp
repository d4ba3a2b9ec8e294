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

#include "uniped/robot_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "uniped/errors.hpp"
#include "uniped/so3.hpp"

namespace uniped {
namespace {

void check_joint_dim(const RobotModel& model, const Eigen::VectorXd& q,
                     const char* op) {
  if (q.size() != model.joint_count()) {
    throw ModelError(std::string(op) + ": joint vector has " +
                     std::to_string(q.size()) + " entries, model has " +
                     std::to_string(model.joint_count()) + " joints");
  }
}

}  // namespace

double DrivetrainEntry::eval(const Eigen::VectorXd& q) const {
  double v = constant;
  if (poly_variable >= 0) {
    const double x = q(poly_variable);
    double xn = 1.0;
    for (const double c : poly_coeffs) {
      v += c * xn;
      xn *= x;
    }
  }
  return v;
}

double DrivetrainEntry::eval_derivative(const Eigen::VectorXd& q) const {
  if (poly_variable < 0) return 0.0;
  const double x = q(poly_variable);
  double d = 0.0;
  double xn = 1.0;
  for (size_t k = 1; k < poly_coeffs.size(); ++k) {
    d += static_cast<double>(k) * poly_coeffs[k] * xn;
    xn *= x;
  }
  return d;
}

const DrivetrainEntry& DrivetrainMap::entry(int motor, int joint) const {
  return entries[motor * motor_count + joint];
}

Eigen::MatrixXd DrivetrainMap::eval(const Eigen::VectorXd& q) const {
  Eigen::MatrixXd J(motor_count, motor_count);
  for (int m = 0; m < motor_count; ++m) {
    for (int j = 0; j < motor_count; ++j) {
      J(m, j) = entry(m, j).eval(q);
    }
  }
  return J;
}

Eigen::MatrixXd DrivetrainMap::eval_derivative(const Eigen::VectorXd& q,
                                               int l) const {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(motor_count, motor_count);
  for (int m = 0; m < motor_count; ++m) {
    for (int j = 0; j < motor_count; ++j) {
      const auto& e = entry(m, j);
      if (e.poly_variable == l) D(m, j) = e.eval_derivative(q);
    }
  }
  return D;
}

const Eigen::VectorXd& RobotModel::pose(const std::string& pose_name) const {
  const auto it = named_poses.find(pose_name);
  if (it == named_poses.end()) {
    throw ModelError("unknown pose '" + pose_name + "'");
  }
  return it->second;
}

Eigen::VectorXd RobotModel::joint_lower() const {
  Eigen::VectorXd lo(joint_count());
  for (int j = 0; j < joint_count(); ++j) lo(j) = joints[j].q_min;
  return lo;
}

Eigen::VectorXd RobotModel::joint_upper() const {
  Eigen::VectorXd hi(joint_count());
  for (int j = 0; j < joint_count(); ++j) hi(j) = joints[j].q_max;
  return hi;
}

std::vector<FramePose> link_frames(const RobotModel& model,
                                   const Eigen::Vector3d& base_pos,
                                   const Eigen::Matrix3d& base_rot,
                                   const Eigen::VectorXd& q) {
  check_joint_dim(model, q, "link_frames");
  std::vector<FramePose> frames(model.links.size());
  frames[0] = {base_rot, base_pos};
  for (int j = 0; j < model.joint_count(); ++j) {
    const FramePose& parent = frames[j];
    const Eigen::Vector3d origin =
        parent.position +
        parent.rotation * Eigen::Vector3d(0, 0, -model.links[j].length);
    const Eigen::Matrix3d rot =
        parent.rotation * exp_map(model.joints[j].axis * q(j));
    frames[j + 1] = {rot, origin};
  }
  return frames;
}

std::vector<Eigen::Vector3d> forward_kinematics(const RobotModel& model,
                                                const Eigen::Vector3d& base_pos,
                                                const Eigen::Matrix3d& base_rot,
                                                const Eigen::VectorXd& q) {
  const auto frames = link_frames(model, base_pos, base_rot, q);
  std::vector<Eigen::Vector3d> out;
  out.reserve(model.contacts.size());
  for (const auto& c : model.contacts) {
    const FramePose& f = frames[c.parent_link];
    out.push_back(f.position + f.rotation * c.offset);
  }
  return out;
}

BaseFrameKinematics base_frame_kinematics(const RobotModel& model,
                                          const Eigen::VectorXd& q,
                                          bool second_order) {
  check_joint_dim(model, q, "base_frame_kinematics");
  const int n = model.joint_count();
  const auto frames =
      link_frames(model, Eigen::Vector3d::Zero(), Eigen::Matrix3d::Identity(), q);

  // Joint axes and origins in the base frame.
  std::vector<Eigen::Vector3d> axis(n), origin(n);
  for (int j = 0; j < n; ++j) {
    axis[j] = frames[j].rotation * model.joints[j].axis;
    origin[j] = frames[j].position +
                frames[j].rotation * Eigen::Vector3d(0, 0, -model.links[j].length);
  }

  BaseFrameKinematics kin;
  const int nc = model.contact_count();
  kin.position.resize(nc);
  kin.dpos_dq.assign(nc, Eigen::MatrixXd::Zero(3, n));
  if (second_order) {
    kin.d2pos_dqdq.assign(nc, std::vector<Eigen::Vector3d>(
                                  n * n, Eigen::Vector3d::Zero()));
  }

  for (int i = 0; i < nc; ++i) {
    const auto& c = model.contacts[i];
    const FramePose& f = frames[c.parent_link];
    const Eigen::Vector3d s = f.position + f.rotation * c.offset;
    kin.position[i] = s;
    // Joint j moves the contact iff the contact's link is distal to it.
    const int deepest = c.parent_link;  // joints 0 .. deepest-1 are ancestors
    for (int j = 0; j < deepest; ++j) {
      kin.dpos_dq[i].col(j) = axis[j].cross(s - origin[j]);
    }
    if (second_order) {
      for (int j = 0; j < deepest; ++j) {
        for (int l = 0; l <= j; ++l) {
          // d2 s / (dq_l dq_j) = a_l x (a_j x (s - o_j)) for l <= j.
          const Eigen::Vector3d v =
              axis[l].cross(axis[j].cross(s - origin[j]));
          kin.d2pos_dqdq[i][j * n + l] = v;
          kin.d2pos_dqdq[i][l * n + j] = v;
        }
      }
    }
  }
  return kin;
}

std::vector<Eigen::MatrixXd> contact_jacobian(const RobotModel& model,
                                              const Eigen::Vector3d& base_pos,
                                              const Eigen::Matrix3d& base_rot,
                                              const Eigen::VectorXd& q) {
  check_joint_dim(model, q, "contact_jacobian");
  const int n = model.joint_count();
  const auto kin = base_frame_kinematics(model, q, /*second_order=*/false);
  std::vector<Eigen::MatrixXd> out;
  out.reserve(model.contacts.size());
  for (int i = 0; i < model.contact_count(); ++i) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(3, 6 + n);
    J.block<3, 3>(0, 0) = Eigen::Matrix3d::Identity();
    J.block<3, 3>(0, 3) = -base_rot * skew(kin.position[i]);
    J.block(0, 6, 3, n) = base_rot * kin.dpos_dq[i];
    out.push_back(std::move(J));
  }
  (void)base_pos;  // the Jacobian does not depend on the base position
  return out;
}

Eigen::MatrixXd coactuation_jacobian(const RobotModel& model,
                                     const Eigen::VectorXd& q) {
  check_joint_dim(model, q, "coactuation_jacobian");
  return model.drivetrain.eval(q);
}

Eigen::VectorXd joint_torque_capacity(const RobotModel& model,
                                      const Eigen::VectorXd& q) {
  check_joint_dim(model, q, "joint_torque_capacity");
  const Eigen::VectorXd cap =
      model.drivetrain.eval(q).transpose() * model.drivetrain.motor_torque_max;
  for (int j = 0; j < cap.size(); ++j) {
    if (cap(j) < 0.0) {
      throw ModelError("joint_torque_capacity: negative bound for joint '" +
                       model.joints[j].name +
                       "' (bad drivetrain configuration)");
    }
  }
  return cap;
}

Eigen::Vector3d com_position(const RobotModel& model,
                             const Eigen::Vector3d& base_pos,
                             const Eigen::Matrix3d& base_rot,
                             const Eigen::VectorXd& q) {
  const auto frames = link_frames(model, base_pos, base_rot, q);
  Eigen::Vector3d weighted = Eigen::Vector3d::Zero();
  for (size_t l = 0; l < model.links.size(); ++l) {
    const Eigen::Vector3d com =
        frames[l].position +
        frames[l].rotation *
            Eigen::Vector3d(0, 0, -model.links[l].com_offset);
    double m = model.links[l].mass;
    if (l == 0) m += model.base_mass_extra;  // payload rides on the torso
    weighted += m * com;
  }
  return weighted / model.total_mass;
}

double base_height_for_ground_contact(const RobotModel& model,
                                      const Eigen::VectorXd& q) {
  const auto contacts = forward_kinematics(model, Eigen::Vector3d::Zero(),
                                           Eigen::Matrix3d::Identity(), q);
  double zmin = std::numeric_limits<double>::infinity();
  for (const auto& r : contacts) zmin = std::min(zmin, r.z());
  return -zmin;
}

Eigen::VectorXd flat_foot_pose(const RobotModel& model, double base_drop) {
  if (!model.planar || model.joint_count() != 4) {
    throw ModelError("flat_foot_pose requires the planar 4-joint chain");
  }
  const double l_thigh = model.links[1].length;
  const double l_shank = model.links[2].length;
  const double l_foot = model.links[3].length;
  const double l_torso = model.links[0].length;

  const double base_z = model.standing_base_height - base_drop;
  const double hip_z = base_z - l_torso;
  const double ankle_z = l_foot;  // toe joint on the ground
  const double D = hip_z - ankle_z;
  if (D <= std::abs(l_thigh - l_shank) || D >= l_thigh + l_shank) {
    throw ModelError("flat_foot_pose: requested drop is outside the leg's reach");
  }
  const double gamma = std::acos(
      (l_thigh * l_thigh + D * D - l_shank * l_shank) / (2.0 * l_thigh * D));
  const double delta = std::acos(
      (l_shank * l_shank + D * D - l_thigh * l_thigh) / (2.0 * l_shank * D));

  Eigen::VectorXd q(4);
  q << -gamma, gamma + delta, -delta, -std::numbers::pi / 2.0;

  const Eigen::VectorXd lo = model.joint_lower();
  const Eigen::VectorXd hi = model.joint_upper();
  for (int j = 0; j < 4; ++j) {
    if (q(j) < lo(j) - 1e-9 || q(j) > hi(j) + 1e-9) {
      throw ModelError("flat_foot_pose: joint '" + model.joints[j].name +
                       "' leaves its limits at this crouch depth");
    }
  }
  return q;
}

namespace {

Eigen::Matrix3d point_mass_inertia(double mass, const Eigen::Vector3d& d) {
  return mass * (d.squaredNorm() * Eigen::Matrix3d::Identity() -
                 d * d.transpose());
}

Eigen::Matrix3d composite_inertia_at(const RobotModel& model,
                                     const Eigen::VectorXd& q) {
  const auto frames = link_frames(model, Eigen::Vector3d::Zero(),
                                  Eigen::Matrix3d::Identity(), q);
  Eigen::Matrix3d I = Eigen::Matrix3d::Zero();
  for (size_t l = 0; l < model.links.size(); ++l) {
    const Eigen::Vector3d com =
        frames[l].position +
        frames[l].rotation * Eigen::Vector3d(0, 0, -model.links[l].com_offset);
    I += frames[l].rotation * model.links[l].inertia_about_com *
         frames[l].rotation.transpose();
    double m = model.links[l].mass;
    if (l == 0) m += model.base_mass_extra;
    I += point_mass_inertia(m, com);
  }
  return I;
}

int find_link(const RobotModel& model, const ConfigNode& at,
              const std::string& name) {
  for (size_t l = 0; l < model.links.size(); ++l) {
    if (model.links[l].name == name) return static_cast<int>(l);
  }
  at.fail("unknown link '" + name + "'");
}

int find_joint(const RobotModel& model, const ConfigNode& at,
               const std::string& name) {
  for (int j = 0; j < model.joint_count(); ++j) {
    if (model.joints[j].name == name) return j;
  }
  at.fail("unknown joint '" + name + "'");
}

int find_motor(const DrivetrainMap& map, const ConfigNode& at,
               const std::string& name) {
  for (int m = 0; m < map.motor_count; ++m) {
    if (map.motor_names[m] == name) return m;
  }
  at.fail("unknown motor '" + name + "'");
}

void validate_capacity_by_sampling(const RobotModel& model) {
  const int n = model.joint_count();
  const Eigen::VectorXd lo = model.joint_lower();
  const Eigen::VectorXd hi = model.joint_upper();
  // Deterministic grid over the joint-limit box.
  const int steps = 5;
  std::vector<int> idx(n, 0);
  while (true) {
    Eigen::VectorXd q(n);
    for (int j = 0; j < n; ++j) {
      q(j) = lo(j) + (hi(j) - lo(j)) * idx[j] / (steps - 1);
    }
    joint_torque_capacity(model, q);  // throws on a negative entry
    int j = 0;
    for (; j < n; ++j) {
      if (++idx[j] < steps) break;
      idx[j] = 0;
    }
    if (j == n) break;
  }
}

}  // namespace

RobotModel load_robot_model(const ConfigNode& root) {
  RobotModel model;
  const ConfigNode& m = root.child("model");
  model.name = m.get_string("name", "unnamed");
  model.planar = m.get_bool("planar", true);
  model.base_mass_extra = m.get_double("payload_kg", 0.0);
  model.crouch_base_drop = m.get_double("crouch_drop", 0.25);

  for (const ConfigNode* ln : root.all("link")) {
    LinkParams link;
    link.name = ln->get_string("name");
    link.length = ln->get_double("length");
    link.mass = ln->get_double("mass");
    link.com_offset = ln->get_double("com_offset");
    const Eigen::Vector3d d = ln->child("inertia_diag").as_vec3();
    link.inertia_about_com = d.asDiagonal();
    if (link.length <= 0.0) ln->fail("link length must be positive");
    if (link.mass <= 0.0) ln->fail("link mass must be positive");
    if (d.minCoeff() <= 0.0) ln->fail("inertia entries must be positive");
    model.links.push_back(std::move(link));
  }
  if (model.links.size() < 2) {
    throw ModelError("model needs at least a base and one moving link");
  }

  for (const ConfigNode* jn : root.all("joint")) {
    JointSpec joint;
    joint.name = jn->get_string("name");
    joint.axis = jn->get_vec3("axis", Eigen::Vector3d::UnitY());
    joint.q_min = jn->get_double("q_min");
    joint.q_max = jn->get_double("q_max");
    if (std::abs(joint.axis.norm() - 1.0) > 1e-9) {
      jn->fail("joint axis must have unit norm");
    }
    if (!(joint.q_min < joint.q_max)) jn->fail("requires q_min < q_max");
    model.joints.push_back(std::move(joint));
  }
  if (model.joints.size() + 1 != model.links.size()) {
    throw ModelError("serial chain requires joint count = link count - 1");
  }

  for (const ConfigNode* cn : root.all("contact")) {
    ContactPoint c;
    c.id = static_cast<int>(model.contacts.size());
    c.parent_link_name = cn->get_string("link");
    c.parent_link = find_link(model, *cn, c.parent_link_name);
    c.offset = cn->child("offset").as_vec3();
    const std::string group = cn->get_string("group");
    if (group == "toe") {
      c.group = ContactGroup::kToe;
    } else if (group == "heel") {
      c.group = ContactGroup::kHeel;
    } else {
      cn->fail("contact group must be 'toe' or 'heel'");
    }
    model.contacts.push_back(std::move(c));
  }
  if (model.contacts.empty()) throw ModelError("model has no contact points");

  for (const ConfigNode* an : root.all("actuator")) {
    ActuatorParams a;
    a.name = an->get_string("name");
    a.Kt = an->get_double("kt");
    a.tau_peak = an->get_double("tau_peak");
    a.omega_max = an->get_double("omega_max");
    a.internal_gear_ratio = an->get_double("gear", 1.0);
    a.backlash_output_deg = an->get_double("backlash_deg", 0.0);
    a.winding_resistance = an->get_double("resistance");
    a.v_bus_nominal = an->get_double("v_bus", 48.0);
    a.rotor_inertia = an->get_double("rotor_inertia", 0.0);
    if (a.Kt <= 0 || a.tau_peak <= 0 || a.omega_max <= 0 ||
        a.internal_gear_ratio <= 0 || a.winding_resistance <= 0 ||
        a.v_bus_nominal <= 0 || a.backlash_output_deg < 0) {
      an->fail("actuator parameters must be positive");
    }
    model.actuators.push_back(std::move(a));
  }

  const ConfigNode& dn = root.child("drivetrain");
  DrivetrainMap& map = model.drivetrain;
  map.motor_names = dn.child("motors").as_strings();
  map.motor_count = static_cast<int>(map.motor_names.size());
  if (map.motor_count != model.joint_count()) {
    throw ModelError("drivetrain motor count must equal joint count");
  }
  map.entries.assign(map.motor_count * map.motor_count, DrivetrainEntry{});
  map.motor_torque_max.resize(map.motor_count);
  map.motor_speed_max.resize(map.motor_count);
  {
    // Motor rows are backed by named actuators.
    std::vector<ActuatorParams> ordered;
    for (int i = 0; i < map.motor_count; ++i) {
      const auto it = std::find_if(
          model.actuators.begin(), model.actuators.end(),
          [&](const ActuatorParams& a) { return a.name == map.motor_names[i]; });
      if (it == model.actuators.end()) {
        dn.child("motors").fail("no actuator named '" + map.motor_names[i] + "'");
      }
      ordered.push_back(*it);
      map.motor_torque_max(i) = it->tau_peak;
      map.motor_speed_max(i) = it->omega_max;
    }
    model.actuators = std::move(ordered);
  }
  for (const ConfigNode* en : dn.all("entry")) {
    const int motor = find_motor(map, *en, en->get_string("motor"));
    const int joint = find_joint(model, *en, en->get_string("joint"));
    DrivetrainEntry& e = map.entries[motor * map.motor_count + joint];
    e.constant = en->get_double("constant", 0.0);
    if (en->has("poly")) {
      const auto tokens = en->child("poly").as_strings();
      if (tokens.size() < 2) en->fail("poly needs a joint name and coefficients");
      e.poly_variable = find_joint(model, *en, tokens[0]);
      e.poly_coeffs.clear();
      for (size_t t = 1; t < tokens.size(); ++t) {
        ConfigNode tmp = en->child("poly");
        tmp.value = tokens[t];
        e.poly_coeffs.push_back(tmp.as_double());
      }
    }
    // Record assisting rows on the joint spec.
    model.joints[joint].actuator_ids.push_back(motor);
  }

  double link_mass = 0.0;
  for (const auto& l : model.links) link_mass += l.mass;
  model.total_mass = link_mass + model.base_mass_extra;

  // Named poses.
  if (root.has("poses")) {
    for (const auto& pn : root.child("poses").children) {
      const auto vals = pn.as_doubles();
      if (static_cast<int>(vals.size()) != model.joint_count()) {
        pn.fail("pose must list one value per joint");
      }
      model.named_poses[pn.key] =
          Eigen::Map<const Eigen::VectorXd>(vals.data(), vals.size());
    }
  }
  if (!model.named_poses.count("standing")) {
    throw ModelError("model config must define poses: standing");
  }
  model.standing_base_height =
      base_height_for_ground_contact(model, model.pose("standing"));
  if (!model.named_poses.count("crouch")) {
    if (model.planar && model.joint_count() == 4 &&
        model.crouch_base_drop > 0.0) {
      model.named_poses["crouch"] =
          flat_foot_pose(model, model.crouch_base_drop);
    } else {
      model.named_poses["crouch"] = model.pose("standing");
    }
  }
  model.composite_inertia = composite_inertia_at(model, model.pose("crouch"));

  validate_capacity_by_sampling(model);
  return model;
}

RobotModel load_robot_model_file(const std::string& path) {
  return load_robot_model(parse_config_file(path));
}

RobotModel default_robot_model(double payload_kg) {
  ConfigNode root = parse_config_text(default_model_config_text(),
                                      "<built-in default model>");
  for (auto& c : root.children) {
    if (c.key != "model") continue;
    for (auto& mc : c.children) {
      if (mc.key == "payload_kg") {
        mc.value = std::to_string(payload_kg);
      }
    }
  }
  return load_robot_model(root);
}

}  // namespace uniped
