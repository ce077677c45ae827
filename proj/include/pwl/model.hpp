#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace pwl {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;
using VecX = Eigen::VectorXd;

// Canonical joint order within one leg, and legs are ordered left then right,
// so q = [HR_L, HAA_L, HFE_L, KFE_L, ANKLE_L, HR_R, ...].
enum JointKind { kHR = 0, kHAA = 1, kHFE = 2, kKFE = 3, kANKLE = 4 };
constexpr int kJointsPerLeg = 5;
constexpr int kNumJoints = 10;
constexpr int kNumFeet = 2;

struct LinkSpec {
  std::string name;
  double mass = 0.0;        // kg
  Mat3 inertia_com = Mat3::Zero();  // about COM, link-frame axes [kg m^2]
  Vec3 com = Vec3::Zero();  // COM offset in the link (joint child) frame [m]
};

struct JointSpec {
  std::string name;
  int parent = 0;           // parent body index (0 = base, i+1 = link i)
  Vec3 axis = Vec3::UnitZ();    // revolute axis, parent-frame coords
  Vec3 origin = Vec3::Zero();   // joint origin offset in parent frame [m]
  double pos_min = 0.0, pos_max = 0.0;  // [rad]
  double vel_limit = 0.0;   // [rad/s]
  double torque_limit = 0.0;  // [N m]
};

struct BaseSpec {
  double mass = 0.0;
  Mat3 inertia_com = Mat3::Zero();
  Vec3 com = Vec3::Zero();
};

struct FootGeometry {
  int ankle_joint = 0;                 // joint index carrying the foot link
  std::vector<Vec3> contact_points;    // in foot (ankle child) frame [m]
};

struct RobotModel {
  int model_version = 1;
  BaseSpec base;
  std::vector<JointSpec> joints;   // joints[i] drives links[i]
  std::vector<LinkSpec> links;
  std::array<FootGeometry, kNumFeet> feet;  // left, right
  double gravity = 9.81;           // +down magnitude [m/s^2]

  int num_joints() const { return static_cast<int>(joints.size()); }
  int num_bodies() const { return num_joints() + 1; }  // body 0 = base
  double total_mass() const;
  VecX torque_limits() const;
};

struct FrameSet {
  Vec3 base_position = Vec3::Zero();
  Quat base_orientation = Quat::Identity();
  std::vector<Vec3> body_position;       // world, per body (0 = base)
  std::vector<Quat> body_orientation;
  std::array<Vec3, kNumFeet> foot_position;   // sole center, world
  std::array<Vec3, kNumFeet> foot_down;       // foot frame -z axis in world (g_f)
  std::array<Vec3, kNumFeet> foot_forward;    // foot frame +x axis in world (f_f)
  std::array<Vec3, kNumFeet> hip_position;    // HFE joint origin, world
  std::array<Vec3, kNumFeet> ankle_position;  // ankle joint origin, world
  double base_height = 0.0;                   // h_b, base origin above ground
};

RobotModel build_default_model();

FrameSet forward_kinematics(const RobotModel& model, const Vec3& base_position,
                            const Quat& base_orientation, const VecX& q);

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_model(const RobotModel& model);

// Base height (ground at z = 0) that places the lowest contact point on the
// ground for a level base at joint configuration q.
double standing_base_height(const RobotModel& model, const VecX& q);

// Sagittal-plane mirror helpers (swap legs; negate HR and HAA).
VecX mirror_joints(const VecX& q);
Vec3 mirror_vec(const Vec3& v);    // y -> -y
Quat mirror_quat(const Quat& r);   // conjugation by diag(1,-1,1)

nlohmann::json model_to_json(const RobotModel& model);
RobotModel model_from_json(const nlohmann::json& j);

}  // namespace pwl
