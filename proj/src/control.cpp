#include "pwl/control.hpp"

#include <cmath>
#include <stdexcept>

namespace pwl {

std::pair<VecX, VecX> filtered_targets(const VecX& a_q, const VecX& filter_memory,
                                       const ControlConfig& cfg) {
  if (a_q.size() != cfg.default_joint_positions.size())
    throw std::invalid_argument("filtered_targets: action size mismatch");
  const VecX raw = cfg.default_joint_positions + cfg.action_scale * a_q;
  const VecX filtered = cfg.filter_beta * raw + (1.0 - cfg.filter_beta) * filter_memory;
  return {filtered, filtered};
}

VecX pd_torque(const VecX& q_target, const VecX& q, const VecX& qd, const ControlConfig& cfg) {
  return cfg.kp * (q_target - q) - cfg.kd * qd;
}

VecX alpha_scale(const VecX& a_alpha, double alpha0, double k) {
  VecX alpha(a_alpha.size());
  for (int i = 0; i < a_alpha.size(); ++i) {
    alpha[i] = alpha0 + (1.0 - alpha0) / (1.0 + std::exp(-k * a_alpha[i]));
  }
  return alpha;
}

VecX modulated_torque(const VecX& tau_raw, const VecX& alpha, const VecX& torque_limits) {
  VecX tau(tau_raw.size());
  for (int i = 0; i < tau_raw.size(); ++i) {
    const double scaled = alpha[i] * tau_raw[i];
    tau[i] = std::clamp(scaled, -torque_limits[i], torque_limits[i]);
  }
  return tau;
}

double alpha0_schedule(int training_iteration, const Alpha0Schedule& schedule) {
  if (training_iteration < 0) throw std::invalid_argument("alpha0_schedule: negative iteration");
  if (schedule.horizon <= 0) return schedule.end;
  const double frac =
      std::min(1.0, static_cast<double>(training_iteration) / schedule.horizon);
  return schedule.start + (schedule.end - schedule.start) * frac;
}

ControlTickResult control_tick(
    const ActionVector& action, const ControlConfig& cfg, const VecX& torque_limits,
    bool passive_enabled, PassiveState& passive, VecX& filter_memory, VecX q, VecX qd,
    const std::function<std::pair<VecX, VecX>(const SubstepCommand&, int substep)>& substep) {
  ControlTickResult result;
  auto [target, new_memory] = filtered_targets(action.a_q, filter_memory, cfg);
  filter_memory = new_memory;
  result.q_target = target;

  const int nj = static_cast<int>(action.a_q.size());
  if (passive_enabled) {
    if (action.a_alpha.size() != nj)
      throw std::invalid_argument("control_tick: a_alpha size mismatch in passive mode");
    result.alpha = alpha_scale(action.a_alpha, passive.alpha0, cfg.sigmoid_k);
    result.alpha_command = alpha_scale(action.a_alpha, 0.0, cfg.sigmoid_k);
    passive.alpha = result.alpha;
  } else {
    result.alpha = VecX::Ones(nj);
    result.alpha_command = VecX::Ones(nj);
  }

  result.substep_tau.reserve(cfg.decimation);
  for (int k = 0; k < cfg.decimation; ++k) {
    SubstepCommand cmd;
    cmd.tau = modulated_torque(pd_torque(target, q, qd, cfg), result.alpha, torque_limits);
    cmd.tau_explicit =
        modulated_torque(cfg.kp * (target - q), result.alpha, torque_limits);
    cmd.damping = cfg.kd * result.alpha;
    result.substep_tau.push_back(cmd.tau);
    std::tie(q, qd) = substep(cmd, k);
  }
  return result;
}

}  // namespace pwl
