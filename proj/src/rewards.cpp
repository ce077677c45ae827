#include "pwl/rewards.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pwl {

GaitState advance_gait(double t, double cycle_time, double stance_ratio) {
  if (cycle_time <= 0.0) throw std::invalid_argument("advance_gait: cycle_time must be > 0");
  GaitState g;
  g.cycle_time = cycle_time;
  g.stance_ratio = stance_ratio;
  double phase = std::fmod(t / cycle_time, 1.0);
  if (phase < 0.0) phase += 1.0;
  g.phase[0] = phase;
  g.phase[1] = std::fmod(phase + 0.5, 1.0);
  const double angle = 2.0 * std::numbers::pi * phase;
  g.phase_sin = std::sin(angle);
  g.phase_cos = std::cos(angle);
  return g;
}

std::array<int, kNumFeet> desired_contacts(const GaitState& gait) {
  std::array<int, kNumFeet> c;
  for (int i = 0; i < kNumFeet; ++i) c[i] = gait.phase[i] < gait.stance_ratio ? 1 : 0;
  return c;
}

double phi_kernel(const VecX& psi, const VecX& w) {
  if (psi.size() != w.size()) throw std::invalid_argument("phi_kernel: size mismatch");
  double s = 0.0;
  for (int i = 0; i < psi.size(); ++i) s += w[i] * psi[i] * psi[i];
  return std::exp(s);
}

double air_time_credit(const std::array<bool, kNumFeet>& touchdown,
                       const std::array<double, kNumFeet>& landed_air_time) {
  double credit = 0.0;
  for (int i = 0; i < kNumFeet; ++i) {
    if (touchdown[i]) credit += landed_air_time[i] - 0.3;
  }
  return credit;
}

const std::array<const char*, RewardBreakdown::kNumTerms>& RewardBreakdown::term_names() {
  static const std::array<const char*, kNumTerms> names = {
      "lin_vel",       "ang_vel",         "base_height",  "orientation",
      "joint_acc",     "joint_torque",    "joint_limit",  "feet_air_time",
      "contact_pattern", "feet_orientation", "feet_forward", "feet_position",
      "feet_step_height", "passive_action"};
  return names;
}

namespace {

VecX constant_weights(int n, double w) { return VecX::Constant(n, w); }

}  // namespace

RewardBreakdown compute_reward(const RewardContext& ctx, const RewardWeights& weights,
                               bool passive_enabled) {
  RewardBreakdown out;
  const int nj = static_cast<int>(ctx.q.size());

  // tracking
  VecX lin_w(3);
  lin_w << -4.0, -4.0, -0.4;
  out.unweighted[0] = phi_kernel(ctx.lin_vel_target - ctx.lin_vel, lin_w);

  VecX ang_w(3);
  ang_w << -0.8, -0.8, -8.0;
  out.unweighted[1] = phi_kernel(ctx.ang_vel_target - ctx.ang_vel, ang_w);

  VecX height_err(1);
  height_err << ctx.base_height_target - ctx.base_height;
  out.unweighted[2] = phi_kernel(height_err, constant_weights(1, -2000.0));

  const double tilt_sq = ctx.projected_gravity.head<2>().squaredNorm();
  out.unweighted[3] = std::max(tilt_sq, 0.1);

  // joint regularizers
  out.unweighted[4] = phi_kernel(ctx.qdd, constant_weights(nj, -1e-4));

  const double torque_l1 = ctx.tau.lpNorm<1>() / ctx.total_gravity;
  out.unweighted[5] = std::exp(weights.literal_torque_reward ? torque_l1 : -torque_l1);

  double limit_sq = 0.0;
  for (int i = 0; i < nj; ++i) {
    const double clipped = std::clamp(ctx.q[i], ctx.q_min[i], ctx.q_max[i]);
    const double v = ctx.q[i] - clipped;
    limit_sq += v * v;
  }
  out.unweighted[6] = limit_sq;

  // gait
  out.unweighted[7] = air_time_credit(ctx.touchdown, ctx.landed_air_time);

  double contact_l1 = 0.0;
  for (int i = 0; i < kNumFeet; ++i)
    contact_l1 += std::abs(ctx.desired_contact[i] - ctx.contact[i]);
  out.unweighted[8] = 1.0 - contact_l1 / kNumFeet;

  VecX feet_xy(2 * kNumFeet);
  for (int i = 0; i < kNumFeet; ++i) feet_xy.segment<2>(2 * i) = ctx.foot_down[i].head<2>();
  out.unweighted[9] = phi_kernel(feet_xy, constant_weights(2 * kNumFeet, -8.0));

  // forward axis error relative to the heading direction (unit x in the
  // heading frame), xy components
  VecX fwd_err(2 * kNumFeet);
  for (int i = 0; i < kNumFeet; ++i) {
    fwd_err[2 * i] = ctx.foot_forward[i].x() - 1.0;
    fwd_err[2 * i + 1] = ctx.foot_forward[i].y();
  }
  out.unweighted[10] = phi_kernel(fwd_err, constant_weights(2 * kNumFeet, -8.0));

  VecX pos_err(3 * kNumFeet), pos_w(3 * kNumFeet);
  for (int i = 0; i < kNumFeet; ++i) {
    pos_err.segment<3>(3 * i) = ctx.foot_position_target[i] - ctx.foot_position[i];
    pos_w.segment<3>(3 * i) = Vec3(-1000.0, -1000.0, 0.0);
  }
  out.unweighted[11] = phi_kernel(pos_err, pos_w);

  double step_height = 0.0;
  for (int i = 0; i < kNumFeet; ++i) {
    step_height += std::abs(weights.literal_step_height
                                ? std::max(ctx.foot_height[i], ctx.foot_height_target[i])
                                : std::min(ctx.foot_height[i], ctx.foot_height_target[i]));
  }
  out.unweighted[12] = step_height;

  out.unweighted[13] = 0.0;
  if (passive_enabled) {
    if (ctx.alpha_command.size() != nj)
      throw std::invalid_argument("compute_reward: alpha_command missing in passive mode");
    out.unweighted[13] = (VecX::Ones(nj) - ctx.alpha_command).lpNorm<1>();
  }

  const double w[RewardBreakdown::kNumTerms] = {
      weights.lin_vel,        weights.ang_vel,       weights.base_height,
      weights.orientation,    weights.joint_acc,     weights.joint_torque,
      weights.joint_limit,    weights.feet_air_time, weights.contact_pattern,
      weights.feet_orientation, weights.feet_forward, weights.feet_position,
      weights.feet_step_height, passive_enabled ? weights.passive_scale : 0.0};

  out.total = 0.0;
  for (int i = 0; i < RewardBreakdown::kNumTerms; ++i) {
    if (!std::isfinite(out.unweighted[i])) {
      throw std::runtime_error(std::string("compute_reward: non-finite term ") +
                               RewardBreakdown::term_names()[i]);
    }
    out.weighted[i] = w[i] * out.unweighted[i];
    out.total += out.weighted[i];
  }
  return out;
}

}  // namespace pwl
