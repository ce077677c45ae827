#pragma once

#include <functional>

#include "pwl/model.hpp"

namespace pwl {

struct ControlConfig {
  VecX default_joint_positions;  // q0 [rad]
  double action_scale = 0.25;    // k_q
  double kp = 60.0;              // [N m / rad]
  double kd = 5.0;               // [N m s / rad]; desired joint velocity is 0
  double filter_beta = 0.2;      // first-order low-pass coefficient, (0,1]
  double sigmoid_k = 10.0;       // activation sharpness
  double control_rate = 50.0;    // [Hz]
  int decimation = 4;            // PD substeps per control tick (200 Hz PD)

  double control_dt() const { return 1.0 / control_rate; }
  double physics_dt() const { return 1.0 / (control_rate * decimation); }
};

struct ActionVector {
  VecX a_q;      // per-joint position action
  VecX a_alpha;  // per-joint activation action (empty in baseline mode)
};

struct PassiveState {
  double alpha0 = 0.0;  // curriculum-controlled minimum activeness
  VecX alpha;           // last computed per-joint activations
};

// raw target = q0 + k_q * a_q, then first-order low-pass: beta*raw + (1-beta)*prev
std::pair<VecX, VecX> filtered_targets(const VecX& a_q, const VecX& filter_memory,
                                       const ControlConfig& cfg);

// tau_raw = kp (q* - q) - kd qd
VecX pd_torque(const VecX& q_target, const VecX& q, const VecX& qd, const ControlConfig& cfg);

// alpha = alpha0 + (1 - alpha0) * sigmoid(k * a_alpha)
VecX alpha_scale(const VecX& a_alpha, double alpha0, double k);

// tau = clamp(alpha .* tau_raw, -limit, limit)
VecX modulated_torque(const VecX& tau_raw, const VecX& alpha, const VecX& torque_limits);

struct Alpha0Schedule {
  double start = 0.5;
  double end = 0.0;
  int horizon = 1000;  // iterations to decay from start to end
};

double alpha0_schedule(int training_iteration, const Alpha0Schedule& schedule);

// Torque command for one PD substep. `tau` is the full commanded torque
// (what gets logged and limit-checked). For stable explicit stepping the
// damping part is handed to the integrator as an implicit viscous
// coefficient: apply `tau_explicit` as torque and `damping` via the
// dynamics' implicit joint damping.
struct SubstepCommand {
  VecX tau;           // clamp(alpha .* (kp (q*-q) - kd qd))
  VecX tau_explicit;  // clamp(alpha .* kp (q*-q))
  VecX damping;       // alpha .* kd
};

struct ControlTickResult {
  VecX q_target;                 // filtered target held over the tick
  VecX alpha;                    // activations used (all ones in baseline mode)
  VecX alpha_command;            // sigmoid(k a_alpha), the constrained a_alpha
  std::vector<VecX> substep_tau; // torque commanded at each PD substep
};

// One 50 Hz control tick: filter the target once, then for each of the
// `decimation` substeps query fresh joint feedback, run PD + modulation, and
// hand the command to `substep`, which advances the plant and returns the new
// (q, qd). filter_memory and passive.alpha are updated in place.
ControlTickResult control_tick(
    const ActionVector& action, const ControlConfig& cfg, const VecX& torque_limits,
    bool passive_enabled, PassiveState& passive, VecX& filter_memory, VecX q, VecX qd,
    const std::function<std::pair<VecX, VecX>(const SubstepCommand&, int substep)>& substep);

}  // namespace pwl
