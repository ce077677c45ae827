#include "pwl/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace pwl {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Mat3 cylinder_inertia(double m, double r, double h) {
  Mat3 inertia = Mat3::Zero();
  inertia(0, 0) = inertia(1, 1) = m * (3.0 * r * r + h * h) / 12.0;
  inertia(2, 2) = 0.5 * m * r * r;
  return inertia;
}

Mat3 cuboid_inertia(double m, double sx, double sy, double sz) {
  Mat3 inertia = Mat3::Zero();
  inertia(0, 0) = m * (sy * sy + sz * sz) / 12.0;
  inertia(1, 1) = m * (sx * sx + sz * sz) / 12.0;
  inertia(2, 2) = m * (sx * sx + sy * sy) / 12.0;
  return inertia;
}

struct JointTypeDef {
  const char* name;
  Vec3 axis;
  double pos_min, pos_max;   // Table II range [rad]
  double vel_limit;          // rated motor velocity [rad/s]
  double torque_limit;       // peak torque [N m]
};

// Actuation: one motor family with per-joint reductions. Rated torque/velocity
// 72 Nm @ 20 rad/s (18:1 on HR/HAA/KFE), 80 Nm @ 18 rad/s (20:1 on HFE),
// 40 Nm @ 36 rad/s (10:1 on ankle); peak torque is 3.3x rated.
const JointTypeDef kJointDefs[kJointsPerLeg] = {
    {"HR", Vec3::UnitZ(), -90.0 * kDeg, 60.0 * kDeg, 20.0, 238.0},
    {"HAA", Vec3::UnitX(), -40.0 * kDeg, 40.0 * kDeg, 20.0, 238.0},
    {"HFE", Vec3::UnitY(), -90.0 * kDeg, 90.0 * kDeg, 18.0, 264.0},
    {"KFE", Vec3::UnitY(), 0.0, 110.0 * kDeg, 20.0, 238.0},
    {"ANKLE", Vec3::UnitY(), -45.0 * kDeg, 45.0 * kDeg, 36.0, 132.0},
};

constexpr double kFemurLength = 0.285;
constexpr double kTibiaLength = 0.235;
constexpr double kHipLateral = 0.09;       // base origin to HR joint, lateral
constexpr double kSoleDrop = 0.04;         // ankle axis to sole
constexpr double kFootHalfLength = 0.045;  // fore/heel contact points +-x

// Mass budget: 60% torso, 40% legs (thigh > shank > foot), 30 kg total.
struct LinkMassDef {
  double mass;
  Vec3 com;
  Mat3 inertia;
};

LinkMassDef link_mass_def(int kind) {
  switch (kind) {
    case kHR: return {1.2, {0.0, 0.0, -0.02}, cylinder_inertia(1.2, 0.05, 0.08)};
    case kHAA: return {1.0, {0.0, 0.0, -0.02}, cylinder_inertia(1.0, 0.05, 0.08)};
    case kHFE: return {2.0, {0.0, 0.0, -0.12}, cylinder_inertia(2.0, 0.05, kFemurLength)};
    case kKFE: return {1.2, {0.0, 0.0, -0.09}, cylinder_inertia(1.2, 0.04, kTibiaLength)};
    default: return {0.6, {0.01, 0.0, -0.03}, cuboid_inertia(0.6, 0.16, 0.06, 0.05)};
  }
}

const char* link_base_name(int kind) {
  static const char* names[] = {"hip_yaw_link", "hip_roll_link", "thigh", "shank", "foot"};
  return names[kind];
}

}  // namespace

double RobotModel::total_mass() const {
  double m = base.mass;
  for (const auto& link : links) m += link.mass;
  return m;
}

VecX RobotModel::torque_limits() const {
  VecX lim(num_joints());
  for (int i = 0; i < num_joints(); ++i) lim[i] = joints[i].torque_limit;
  return lim;
}

RobotModel build_default_model() {
  RobotModel m;
  m.base.mass = 18.0;
  m.base.com = Vec3(0.0, 0.0, 0.25);
  m.base.inertia_com = cuboid_inertia(18.0, 0.20, 0.30, 0.48);

  // Per-leg chain: base -> HR(z) -> HAA(x) -> HFE(y) -> KFE(y) -> ANKLE(y).
  const Vec3 joint_offsets[kJointsPerLeg] = {
      {0.0, kHipLateral, -0.02},      // HR from base (y negated on the right)
      {0.0, 0.0, -0.04},              // HAA from HR link
      {0.0, 0.0, -0.04},              // HFE from HAA link
      {0.0, 0.0, -kFemurLength},      // KFE from thigh
      {0.0, 0.0, -kTibiaLength},      // ANKLE from shank
  };

  for (int side = 0; side < 2; ++side) {
    const char* suffix = side == 0 ? "_L" : "_R";
    const double ysign = side == 0 ? 1.0 : -1.0;
    for (int k = 0; k < kJointsPerLeg; ++k) {
      JointSpec j;
      j.name = std::string(kJointDefs[k].name) + suffix;
      j.axis = kJointDefs[k].axis;
      j.origin = joint_offsets[k];
      j.origin.y() *= ysign;
      j.parent = k == 0 ? 0 : static_cast<int>(m.joints.size());  // previous link body
      j.pos_min = kJointDefs[k].pos_min;
      j.pos_max = kJointDefs[k].pos_max;
      j.vel_limit = kJointDefs[k].vel_limit;
      j.torque_limit = kJointDefs[k].torque_limit;
      m.joints.push_back(j);

      LinkSpec link;
      const LinkMassDef def = link_mass_def(k);
      link.name = std::string(link_base_name(k)) + suffix;
      link.mass = def.mass;
      link.com = def.com;
      link.com.y() *= ysign;
      link.inertia_com = def.inertia;
      m.links.push_back(link);
    }
    FootGeometry foot;
    foot.ankle_joint = side * kJointsPerLeg + kANKLE;
    foot.contact_points = {{kFootHalfLength, 0.0, -kSoleDrop},
                           {-kFootHalfLength, 0.0, -kSoleDrop}};
    m.feet[side] = foot;
  }
  return m;
}

FrameSet forward_kinematics(const RobotModel& model, const Vec3& base_position,
                            const Quat& base_orientation, const VecX& q) {
  const int nj = model.num_joints();
  if (q.size() != nj) throw std::invalid_argument("forward_kinematics: q size mismatch");

  FrameSet f;
  f.base_position = base_position;
  f.base_orientation = base_orientation.normalized();
  f.body_position.resize(model.num_bodies());
  f.body_orientation.resize(model.num_bodies());
  f.body_position[0] = f.base_position;
  f.body_orientation[0] = f.base_orientation;

  for (int i = 0; i < nj; ++i) {
    const JointSpec& j = model.joints[i];
    const Vec3& pp = f.body_position[j.parent];
    const Quat& pr = f.body_orientation[j.parent];
    const Vec3 origin = pp + pr * j.origin;
    const Quat rot = pr * Quat(Eigen::AngleAxisd(q[i], j.axis));
    f.body_position[i + 1] = origin;
    f.body_orientation[i + 1] = rot.normalized();
  }

  for (int s = 0; s < kNumFeet; ++s) {
    if (model.feet[s].contact_points.empty()) continue;  // reduced test models
    const int ankle = model.feet[s].ankle_joint;
    const int body = ankle + 1;
    const Quat& rot = f.body_orientation[body];
    Vec3 sole = Vec3::Zero();
    for (const Vec3& p : model.feet[s].contact_points) sole += p;
    sole /= static_cast<double>(model.feet[s].contact_points.size());
    f.foot_position[s] = f.body_position[body] + rot * sole;
    f.foot_down[s] = rot * Vec3(0.0, 0.0, -1.0);
    f.foot_forward[s] = rot * Vec3(1.0, 0.0, 0.0);
    f.ankle_position[s] = f.body_position[body];
    if (nj == kNumJoints) {
      const int hfe = s * kJointsPerLeg + kHFE;
      f.hip_position[s] = f.body_position[hfe + 1];  // HFE child frame origin
    }
  }
  f.base_height = base_position.z();
  return f;
}

namespace {

bool spd(const Mat3& inertia) {
  if (!inertia.isApprox(inertia.transpose(), 1e-12)) return false;
  Eigen::SelfAdjointEigenSolver<Mat3> es(inertia);
  return es.eigenvalues().minCoeff() > 0.0;
}

}  // namespace

ValidationReport validate_model(const RobotModel& model) {
  ValidationReport rep;
  auto fail = [&rep](const std::string& msg) { rep.violations.push_back(msg); };

  if (model.num_joints() != kNumJoints) {
    fail("joints: expected 10 actuated joints, got " + std::to_string(model.num_joints()));
    return rep;  // structural checks below assume the canonical layout
  }
  if (static_cast<int>(model.links.size()) != kNumJoints) {
    fail("links: expected one link per joint");
    return rep;
  }

  if (model.base.mass <= 0.0) fail("base.mass: must be positive");
  if (!spd(model.base.inertia_com)) fail("base.inertia: not symmetric positive definite");
  for (const auto& link : model.links) {
    if (link.mass <= 0.0) fail("link " + link.name + ".mass: must be positive");
    if (!spd(link.inertia_com)) fail("link " + link.name + ".inertia: not SPD");
  }

  for (int side = 0; side < 2; ++side) {
    for (int k = 0; k < kJointsPerLeg; ++k) {
      const int i = side * kJointsPerLeg + k;
      const JointSpec& j = model.joints[i];
      const JointTypeDef& def = kJointDefs[k];
      if (std::abs(j.pos_min - def.pos_min) > 1e-9 || std::abs(j.pos_max - def.pos_max) > 1e-9)
        fail("joint " + j.name + ".limits: outside declared range of motion");
      if (j.torque_limit > def.torque_limit + 1e-9)
        fail("joint " + j.name + ".torque_limit: exceeds actuator peak");
      if (j.torque_limit <= 0.0) fail("joint " + j.name + ".torque_limit: must be positive");
      if (std::abs(j.axis.norm() - 1.0) > 1e-9) fail("joint " + j.name + ".axis: not unit");
    }
  }

  // Left/right mirror symmetry
  for (int k = 0; k < kJointsPerLeg; ++k) {
    const JointSpec& l = model.joints[k];
    const JointSpec& r = model.joints[kJointsPerLeg + k];
    if ((mirror_vec(l.origin) - r.origin).norm() > 1e-9)
      fail("joint " + l.name + "/" + r.name + ": origins not mirrored");
    if ((l.axis - r.axis).norm() > 1e-9)
      fail("joint " + l.name + "/" + r.name + ": axes differ");
    const LinkSpec& ll = model.links[k];
    const LinkSpec& rl = model.links[kJointsPerLeg + k];
    if (std::abs(ll.mass - rl.mass) > 1e-9)
      fail("link " + ll.name + "/" + rl.name + ": masses differ");
    if ((mirror_vec(ll.com) - rl.com).norm() > 1e-9)
      fail("link " + ll.name + "/" + rl.name + ": COMs not mirrored");
  }

  // Segment lengths from the chain geometry
  for (int side = 0; side < 2; ++side) {
    const double femur = model.joints[side * kJointsPerLeg + kKFE].origin.norm();
    const double tibia = model.joints[side * kJointsPerLeg + kANKLE].origin.norm();
    if (std::abs(femur - kFemurLength) > 1e-9)
      fail(std::string("femur length (") + (side == 0 ? "left" : "right") +
           "): expected 0.285 m");
    if (std::abs(tibia - kTibiaLength) > 1e-9)
      fail(std::string("tibia length (") + (side == 0 ? "left" : "right") +
           "): expected 0.235 m");
  }

  for (int s = 0; s < kNumFeet; ++s) {
    if (model.feet[s].contact_points.size() < 2)
      fail("foot " + std::to_string(s) + ": needs at least fore and aft contact points");
  }
  return rep;
}

double standing_base_height(const RobotModel& model, const VecX& q) {
  const FrameSet f = forward_kinematics(model, Vec3::Zero(), Quat::Identity(), q);
  double lowest = 0.0;
  for (int s = 0; s < kNumFeet; ++s) {
    const int body = model.feet[s].ankle_joint + 1;
    for (const Vec3& p : model.feet[s].contact_points) {
      const Vec3 world = f.body_position[body] + f.body_orientation[body] * p;
      lowest = std::min(lowest, world.z());
    }
  }
  return -lowest;
}

VecX mirror_joints(const VecX& q) {
  VecX out(q.size());
  for (int side = 0; side < 2; ++side) {
    for (int k = 0; k < kJointsPerLeg; ++k) {
      const int src = side * kJointsPerLeg + k;
      const int dst = (1 - side) * kJointsPerLeg + k;
      const double sign = (k == kHR || k == kHAA) ? -1.0 : 1.0;
      out[dst] = sign * q[src];
    }
  }
  return out;
}

Vec3 mirror_vec(const Vec3& v) { return {v.x(), -v.y(), v.z()}; }

Quat mirror_quat(const Quat& r) { return {r.w(), -r.x(), r.y(), -r.z()}; }

namespace {

nlohmann::json vec3_json(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

Vec3 vec3_from(const nlohmann::json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

nlohmann::json mat3_json(const Mat3& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < 3; ++r) rows.push_back({m(r, 0), m(r, 1), m(r, 2)});
  return rows;
}

Mat3 mat3_from(const nlohmann::json& j) {
  Mat3 m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = j.at(r).at(c).get<double>();
  return m;
}

}  // namespace

nlohmann::json model_to_json(const RobotModel& model) {
  nlohmann::json j;
  j["model_version"] = model.model_version;
  j["gravity"] = model.gravity;
  j["base"] = {{"mass", model.base.mass},
               {"com", vec3_json(model.base.com)},
               {"inertia", mat3_json(model.base.inertia_com)}};
  j["joints"] = nlohmann::json::array();
  for (const auto& joint : model.joints) {
    j["joints"].push_back({{"name", joint.name},
                           {"parent", joint.parent},
                           {"axis", vec3_json(joint.axis)},
                           {"origin", vec3_json(joint.origin)},
                           {"pos_min", joint.pos_min},
                           {"pos_max", joint.pos_max},
                           {"vel_limit", joint.vel_limit},
                           {"torque_limit", joint.torque_limit}});
  }
  j["links"] = nlohmann::json::array();
  for (const auto& link : model.links) {
    j["links"].push_back({{"name", link.name},
                          {"mass", link.mass},
                          {"com", vec3_json(link.com)},
                          {"inertia", mat3_json(link.inertia_com)}});
  }
  j["feet"] = nlohmann::json::array();
  for (const auto& foot : model.feet) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : foot.contact_points) pts.push_back(vec3_json(p));
    j["feet"].push_back({{"ankle_joint", foot.ankle_joint}, {"contact_points", pts}});
  }
  return j;
}

RobotModel model_from_json(const nlohmann::json& j) {
  RobotModel m;
  m.model_version = j.at("model_version").get<int>();
  m.gravity = j.value("gravity", 9.81);
  const auto& base = j.at("base");
  m.base.mass = base.at("mass").get<double>();
  m.base.com = vec3_from(base.at("com"));
  m.base.inertia_com = mat3_from(base.at("inertia"));
  for (const auto& joint_json : j.at("joints")) {
    JointSpec joint;
    joint.name = joint_json.at("name").get<std::string>();
    joint.parent = joint_json.at("parent").get<int>();
    joint.axis = vec3_from(joint_json.at("axis"));
    joint.origin = vec3_from(joint_json.at("origin"));
    joint.pos_min = joint_json.at("pos_min").get<double>();
    joint.pos_max = joint_json.at("pos_max").get<double>();
    joint.vel_limit = joint_json.at("vel_limit").get<double>();
    joint.torque_limit = joint_json.at("torque_limit").get<double>();
    m.joints.push_back(joint);
  }
  for (const auto& link_json : j.at("links")) {
    LinkSpec link;
    link.name = link_json.at("name").get<std::string>();
    link.mass = link_json.at("mass").get<double>();
    link.com = vec3_from(link_json.at("com"));
    link.inertia_com = mat3_from(link_json.at("inertia"));
    m.links.push_back(link);
  }
  int s = 0;
  for (const auto& foot_json : j.at("feet")) {
    if (s >= kNumFeet) throw std::invalid_argument("model json: too many feet");
    FootGeometry foot;
    foot.ankle_joint = foot_json.at("ankle_joint").get<int>();
    for (const auto& p : foot_json.at("contact_points")) foot.contact_points.push_back(vec3_from(p));
    m.feet[s++] = foot;
  }
  return m;
}

}  // namespace pwl
