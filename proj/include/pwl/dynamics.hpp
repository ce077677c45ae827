#pragma once

#include <array>
#include <vector>

#include "pwl/model.hpp"

namespace pwl {

struct SimState {
  Vec3 base_position = Vec3::Zero();
  Quat base_orientation = Quat::Identity();
  Vec3 base_lin_vel = Vec3::Zero();  // of the base origin, world frame [m/s]
  Vec3 base_ang_vel = Vec3::Zero();  // world frame [rad/s]
  VecX q, qd, qdd;                   // qdd = last computed accelerations
  Vec3 base_lin_acc = Vec3::Zero();  // last computed, world frame
  Vec3 base_ang_acc = Vec3::Zero();
  std::array<int, kNumFeet> contact{{0, 0}};          // c
  std::array<double, kNumFeet> air_time{{0.0, 0.0}};  // t_air [s]
  std::array<bool, kNumFeet> touchdown{{false, false}};  // air->contact this step
  std::array<double, kNumFeet> landed_air_time{{0.0, 0.0}};
  std::array<double, kNumFeet> contact_force{{0.0, 0.0}};  // total normal [N]
  double time = 0.0;
  bool acc_valid = false;  // qdd/base accs hold the dynamics at (q, qd)

  // base-frame views
  Vec3 base_lin_vel_body() const { return base_orientation.conjugate() * base_lin_vel; }
  Vec3 base_ang_vel_body() const { return base_orientation.conjugate() * base_ang_vel; }
  Vec3 projected_gravity() const {
    return base_orientation.conjugate() * Vec3(0.0, 0.0, -1.0);
  }
};

// Standing state at joint configuration q with feet on the ground.
SimState make_standing_state(const RobotModel& model, const VecX& q);

// Defaults sized for explicit 200 Hz stepping against the light foot links:
// the contact-point apparent mass is ~0.7 kg, so stiffness keeps
// dt*sqrt(k/m) near 1 and damping keeps c*dt/m well under 2.
struct ContactParams {
  double stiffness = 3e4;    // normal spring [N/m]
  double damping = 150.0;    // normal and tangential viscous term [N s/m]
  double friction = 0.8;     // Coulomb mu
  double flag_threshold = 5.0;  // per-foot normal force for the contact flag [N]
};

struct ContactPoint {
  int foot = 0;
  Vec3 position = Vec3::Zero();  // world
  Vec3 velocity = Vec3::Zero();  // world
  Vec3 force = Vec3::Zero();     // world, acting on the foot
};

struct ContactSet {
  std::vector<ContactPoint> points;
  std::array<double, kNumFeet> normal_force{{0.0, 0.0}};
  std::array<int, kNumFeet> flags{{0, 0}};
};

// Per-body external wrenches, world frame, torque about the body origin.
struct ExternalForces {
  std::vector<Vec3> force;
  std::vector<Vec3> torque;

  explicit ExternalForces(int num_bodies)
      : force(num_bodies, Vec3::Zero()), torque(num_bodies, Vec3::Zero()) {}
  void add_force_at_point(int body, const Vec3& f_world, const Vec3& point_world,
                          const Vec3& body_origin_world) {
    force[body] += f_world;
    torque[body] += (point_world - body_origin_world).cross(f_world);
  }
};

struct ForwardDynamicsResult {
  VecX qdd;
  Vec3 base_lin_acc = Vec3::Zero();  // classical acceleration of base origin, world
  Vec3 base_ang_acc = Vec3::Zero();  // world
};

// Articulated-body algorithm over the floating-base tree. Gravity enters as
// an external force on every body; ext carries contacts and applied pushes.
// joint_damping adds a per-joint viscous torque -d*qd treated implicitly over
// damping_dt (unconditionally stable); leave empty for the pure equations of
// motion.
ForwardDynamicsResult forward_dynamics(const RobotModel& model, const SimState& state,
                                       const VecX& tau, const ExternalForces& ext,
                                       const VecX& joint_damping = VecX(),
                                       double damping_dt = 0.0);

struct InverseDynamicsResult {
  VecX tau;
  Vec3 base_force = Vec3::Zero();   // wrench required at the base origin, world
  Vec3 base_torque = Vec3::Zero();
};

// Recursive Newton-Euler: torques (and the base wrench) that realize the
// desired accelerations at the state's configuration and velocities.
InverseDynamicsResult inverse_dynamics(const RobotModel& model, const SimState& state,
                                       const Vec3& base_lin_acc_des,
                                       const Vec3& base_ang_acc_des, const VecX& qdd_des,
                                       const ExternalForces& ext);

ContactSet foot_contact_forces(const RobotModel& model, const SimState& state,
                               const ContactParams& params);

// One fixed-dt step: velocity half-kick from the stored accelerations, drift,
// force evaluation at the new positions, trailing half-kick (kick-drift-kick;
// the state's qdd/base accs carry the pending kick). Penalty ground contact;
// f_ext_base is an optional world-frame force at the base origin;
// joint_damping is applied implicitly (see forward_dynamics).
SimState step_physics(const RobotModel& model, const SimState& state, const VecX& tau,
                      const Vec3& f_ext_base, double dt, const ContactParams& params,
                      const VecX& joint_damping = VecX());

// Diagnostics used by conservation tests and metrics.
double mechanical_energy(const RobotModel& model, const SimState& state);
struct Momentum {
  Vec3 linear = Vec3::Zero();
  Vec3 angular = Vec3::Zero();  // about the world origin
};
Momentum system_momentum(const RobotModel& model, const SimState& state);
Vec3 center_of_mass(const RobotModel& model, const SimState& state);

}  // namespace pwl
