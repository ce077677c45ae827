#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>

#include <nlohmann/json.hpp>

#include "pwl/model.hpp"
#include "pwl/rng.hpp"

using namespace pwl;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("default model dimensions and limits") {
  const RobotModel m = build_default_model();
  CHECK(m.num_joints() == 10);
  CHECK(m.total_mass() == doctest::Approx(30.0).epsilon(1e-9));

  // femur / tibia segment lengths from the chain
  CHECK(m.joints[kKFE].origin.norm() == doctest::Approx(0.285));
  CHECK(m.joints[kANKLE].origin.norm() == doctest::Approx(0.235));

  // KFE range of motion [0, 110] deg
  CHECK(m.joints[kKFE].pos_min == doctest::Approx(0.0));
  CHECK(m.joints[kKFE].pos_max == doctest::Approx(110.0 * kPi / 180.0));

  // torque limits: peaks on HFE/KFE per the actuator table
  CHECK(m.joints[kHFE].torque_limit == doctest::Approx(264.0));
  CHECK(m.joints[kKFE].torque_limit == doctest::Approx(238.0));

  CHECK(validate_model(m).ok());
}

TEST_CASE("validate_model reports violations") {
  RobotModel m = build_default_model();
  m.links[2].mass = -1.0;
  auto rep = validate_model(m);
  CHECK_FALSE(rep.ok());
  bool found_mass = false;
  for (const auto& v : rep.violations) found_mass |= v.find("mass") != std::string::npos;
  CHECK(found_mass);

  RobotModel asym = build_default_model();
  asym.joints[kKFE].origin.z() = -0.30;  // left femur longer
  auto rep2 = validate_model(asym);
  CHECK_FALSE(rep2.ok());
}

TEST_CASE("straight-leg FK places the ankle 0.52 m below the hip pitch joint") {
  const RobotModel m = build_default_model();
  const VecX q = VecX::Zero(10);
  const FrameSet f = forward_kinematics(m, Vec3(0, 0, 1.0), Quat::Identity(), q);
  for (int s = 0; s < 2; ++s) {
    const double drop = f.hip_position[s].z() - f.ankle_position[s].z();
    CHECK(drop == doctest::Approx(0.285 + 0.235).epsilon(1e-12));
    // sole sits a further foot-sole offset below the ankle
    CHECK(f.ankle_position[s].z() - f.foot_position[s].z() == doctest::Approx(0.04));
  }
}

TEST_CASE("yawed base rotates the foot forward vectors") {
  const RobotModel m = build_default_model();
  const VecX q = VecX::Zero(10);
  const Quat yaw90(Eigen::AngleAxisd(kPi / 2.0, Vec3::UnitZ()));
  const FrameSet f = forward_kinematics(m, Vec3::Zero(), yaw90, q);
  for (int s = 0; s < 2; ++s) {
    CHECK(f.foot_forward[s].x() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(f.foot_forward[s].y() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("bent knee matches planar two-link FK") {
  const RobotModel m = build_default_model();
  VecX q = VecX::Zero(10);
  const double hfe = 30.0 * kPi / 180.0;
  const double kfe = 90.0 * kPi / 180.0;
  q[kHFE] = hfe;
  q[kKFE] = kfe;
  const FrameSet f = forward_kinematics(m, Vec3::Zero(), Quat::Identity(), q);

  // hand-evaluated planar chain: rotation about +y tips the down vector to
  // (-sin, 0, -cos)
  const Vec3 hip = f.hip_position[0];
  const Vec3 knee_expect = hip + 0.285 * Vec3(-std::sin(hfe), 0.0, -std::cos(hfe));
  const Vec3 ankle_expect =
      knee_expect + 0.235 * Vec3(-std::sin(hfe + kfe), 0.0, -std::cos(hfe + kfe));
  CHECK((f.ankle_position[0] - ankle_expect).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("mirror symmetry of forward kinematics") {
  const RobotModel m = build_default_model();
  Rng rng(314);
  for (int trial = 0; trial < 20; ++trial) {
    VecX q(10);
    for (int i = 0; i < 10; ++i) q[i] = rng.uniform(-0.8, 0.8);
    const Vec3 pos(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0.5, 1.5));
    Quat rot(rng.normal(), rng.normal(), rng.normal(), rng.normal());
    rot.normalize();

    const FrameSet f = forward_kinematics(m, pos, rot, q);
    const FrameSet g = forward_kinematics(m, mirror_vec(pos), mirror_quat(rot), mirror_joints(q));

    for (int s = 0; s < 2; ++s) {
      CHECK((mirror_vec(f.foot_position[s]) - g.foot_position[1 - s]).norm() < 1e-9);
      CHECK((mirror_vec(f.foot_forward[s]) - g.foot_forward[1 - s]).norm() < 1e-9);
      CHECK((mirror_vec(f.foot_down[s]) - g.foot_down[1 - s]).norm() < 1e-9);
    }
  }
}

TEST_CASE("FK is deterministic") {
  const RobotModel m = build_default_model();
  VecX q(10);
  for (int i = 0; i < 10; ++i) q[i] = 0.1 * i - 0.4;
  const Quat rot(Eigen::AngleAxisd(0.3, Vec3(0.2, 0.5, 0.8).normalized()));
  const FrameSet a = forward_kinematics(m, Vec3(0.1, 0.2, 0.9), rot, q);
  const FrameSet b = forward_kinematics(m, Vec3(0.1, 0.2, 0.9), rot, q);
  for (int s = 0; s < 2; ++s) {
    CHECK(a.foot_position[s] == b.foot_position[s]);  // bitwise
    CHECK(a.foot_down[s] == b.foot_down[s]);
  }
}

TEST_CASE("model JSON round-trip and checked-in default file") {
  const RobotModel m = build_default_model();
  const RobotModel rt = model_from_json(model_to_json(m));
  CHECK(model_to_json(rt) == model_to_json(m));

  std::ifstream in(std::string(PWL_SOURCE_DIR) + "/data/default_model.json");
  REQUIRE(in.good());
  nlohmann::json j;
  in >> j;
  CHECK(j == model_to_json(m));
}

TEST_CASE("standing base height matches straight-leg geometry") {
  const RobotModel m = build_default_model();
  // straight legs: hip drop 0.10 + leg 0.52 + sole 0.04
  CHECK(standing_base_height(m, VecX::Zero(10)) == doctest::Approx(0.66).epsilon(1e-9));
}
