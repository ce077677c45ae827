#pragma once

#include <array>

#include "pwl/model.hpp"

namespace pwl {

struct GaitState {
  double cycle_time = 0.8;                      // T [s]
  std::array<double, kNumFeet> phase{{0.0, 0.5}};  // per-foot, right offset 0.5
  double stance_ratio = 0.6;                    // rho: 0.6 walk, 0.38 run
  double phase_sin = 0.0, phase_cos = 1.0;      // encoding of the shared phase
};

GaitState advance_gait(double t, double cycle_time, double stance_ratio);

// stance during the first rho fraction of each foot's cycle
std::array<int, kNumFeet> desired_contacts(const GaitState& gait);

// exp(sum_i w_i * psi_i^2)
double phi_kernel(const VecX& psi, const VecX& w);

struct RewardWeights {
  double lin_vel = 1.0;
  double ang_vel = 0.5;
  double base_height = 0.1;
  double orientation = -20.0;
  double joint_acc = 0.1;
  double joint_torque = 0.05;
  double joint_limit = -100.0;
  double feet_air_time = 1.0;
  double contact_pattern = 0.5;
  double feet_orientation = 0.1;
  double feet_forward = 0.1;
  double feet_position = 0.1;
  double feet_step_height = 0.5;
  double passive_scale = 0.005;
  // Reproduce the printed (sign-flipped) torque / step-height forms instead
  // of the regularizing defaults.
  bool literal_torque_reward = false;
  bool literal_step_height = false;
};

// Every quantity entering the reward terms, assembled once per control tick.
// Vectors are expressed in the base (velocities, gravity) or heading frame
// (foot directions and positions); heading = yaw-only base frame.
struct RewardContext {
  Vec3 lin_vel_target = Vec3::Zero();  // v_b*, base frame
  Vec3 lin_vel = Vec3::Zero();         // v_b
  Vec3 ang_vel_target = Vec3::Zero();  // w_b*
  Vec3 ang_vel = Vec3::Zero();
  double base_height_target = 0.0;  // h_b*
  double base_height = 0.0;
  Vec3 projected_gravity = Vec3::Zero();  // g_b, unit
  VecX tau, qdd, q, q_min, q_max;
  double total_gravity = 0.0;  // G = m g [N]
  std::array<double, kNumFeet> air_time{{0.0, 0.0}};
  std::array<bool, kNumFeet> touchdown{{false, false}};
  std::array<double, kNumFeet> landed_air_time{{0.0, 0.0}};
  std::array<int, kNumFeet> desired_contact{{0, 0}};  // c*
  std::array<int, kNumFeet> contact{{0, 0}};          // c
  std::array<Vec3, kNumFeet> foot_down;     // g_f, heading frame
  std::array<Vec3, kNumFeet> foot_forward;  // f_f, heading frame
  std::array<Vec3, kNumFeet> foot_position;         // p_f, heading frame
  std::array<Vec3, kNumFeet> foot_position_target;  // p_f*
  std::array<double, kNumFeet> foot_height{{0.0, 0.0}};         // h_f
  std::array<double, kNumFeet> foot_height_target{{0.0, 0.0}};  // h_f*
  VecX alpha_command;  // constrained a_alpha in [0,1]; empty unless passive

  RewardContext() {
    foot_down.fill(Vec3(0, 0, -1));
    foot_forward.fill(Vec3(1, 0, 0));
    foot_position.fill(Vec3::Zero());
    foot_position_target.fill(Vec3::Zero());
  }
};

struct RewardBreakdown {
  static constexpr int kNumTerms = 14;
  static const std::array<const char*, kNumTerms>& term_names();
  std::array<double, kNumTerms> unweighted{};
  std::array<double, kNumTerms> weighted{};
  double total = 0.0;
};

// Air-time credit is granted only at the tick where a foot lands.
double air_time_credit(const std::array<bool, kNumFeet>& touchdown,
                       const std::array<double, kNumFeet>& landed_air_time);

RewardBreakdown compute_reward(const RewardContext& ctx, const RewardWeights& weights,
                               bool passive_enabled);

}  // namespace pwl
