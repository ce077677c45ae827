#include "pwl/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pwl/spatial.hpp"

namespace pwl {

using spatial::Mat6;
using spatial::RigidInertia;
using spatial::Transform;
using spatial::Vec6;

namespace {

// Per-body quantities shared by the dynamics passes, all in body coordinates
// except the world poses.
struct TreeKinematics {
  std::vector<Transform> X;       // parent -> body, for bodies 1..N (index by body)
  std::vector<Vec6> S;            // joint motion subspace, body coords
  std::vector<Vec6> v;            // spatial velocity, body coords
  std::vector<Vec6> c;            // velocity-product acceleration bias
  std::vector<Mat3> R;            // body axes in world (x_w = R x_b)
  std::vector<Vec3> p;            // body origin, world
  std::vector<RigidInertia> inertia;
  std::vector<int> parent;        // parent body index
};

void check_finite(const VecX& v, const char* what) {
  for (int i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      std::ostringstream os;
      os << "dynamics: non-finite " << what << " at index " << i;
      throw std::domain_error(os.str());
    }
  }
}

void check_finite(const Vec3& v, const char* what) {
  if (!v.allFinite()) throw std::domain_error(std::string("dynamics: non-finite ") + what);
}

TreeKinematics tree_kinematics(const RobotModel& model, const SimState& state) {
  const int nb = model.num_bodies();
  TreeKinematics k;
  k.X.resize(nb);
  k.S.resize(nb, Vec6::Zero());
  k.v.resize(nb);
  k.c.resize(nb, Vec6::Zero());
  k.R.resize(nb);
  k.p.resize(nb);
  k.inertia.resize(nb);
  k.parent.resize(nb, -1);

  k.R[0] = state.base_orientation.toRotationMatrix();
  k.p[0] = state.base_position;
  k.v[0] = spatial::motion(k.R[0].transpose() * state.base_ang_vel,
                           k.R[0].transpose() * state.base_lin_vel);
  k.inertia[0] =
      RigidInertia::from_com(model.base.mass, model.base.com, model.base.inertia_com);

  for (int j = 0; j < model.num_joints(); ++j) {
    const JointSpec& joint = model.joints[j];
    const int body = j + 1;
    const int pb = joint.parent;
    k.parent[body] = pb;

    const Mat3 r_joint = Eigen::AngleAxisd(state.q[j], joint.axis).toRotationMatrix();
    Transform x;
    x.E = r_joint.transpose();
    x.r = joint.origin;
    k.X[body] = x;
    k.R[body] = k.R[pb] * r_joint;
    k.p[body] = k.p[pb] + k.R[pb] * joint.origin;

    // revolute axis is invariant under its own rotation
    k.S[body] = spatial::motion(joint.axis, Vec3::Zero());
    const Vec6 vj = k.S[body] * state.qd[j];
    k.v[body] = x.apply_motion(k.v[pb]) + vj;
    k.c[body] = spatial::cross_motion(k.v[body], vj);
    k.inertia[body] =
        RigidInertia::from_com(model.links[j].mass, model.links[j].com,
                               model.links[j].inertia_com);
  }
  return k;
}

// Total external spatial force on each body in body coordinates: gravity at
// the COM plus the caller-provided world wrenches.
std::vector<Vec6> body_external_forces(const RobotModel& model, const TreeKinematics& k,
                                       const ExternalForces& ext) {
  const int nb = model.num_bodies();
  std::vector<Vec6> f(nb, Vec6::Zero());
  for (int b = 0; b < nb; ++b) {
    const double mass = b == 0 ? model.base.mass : model.links[b - 1].mass;
    const Vec3 com = b == 0 ? model.base.com : model.links[b - 1].com;
    const Vec3 grav_body = k.R[b].transpose() * Vec3(0.0, 0.0, -mass * model.gravity);
    f[b] += spatial::motion(com.cross(grav_body), grav_body);
    const Vec3 fb = k.R[b].transpose() * ext.force[b];
    const Vec3 nb_torque = k.R[b].transpose() * ext.torque[b];
    f[b] += spatial::motion(nb_torque, fb);
  }
  return f;
}

}  // namespace

SimState make_standing_state(const RobotModel& model, const VecX& q) {
  SimState s;
  s.q = q;
  s.qd = VecX::Zero(model.num_joints());
  s.qdd = VecX::Zero(model.num_joints());
  s.base_position = Vec3(0.0, 0.0, standing_base_height(model, q));
  return s;
}

ForwardDynamicsResult forward_dynamics(const RobotModel& model, const SimState& state,
                                       const VecX& tau, const ExternalForces& ext,
                                       const VecX& joint_damping, double damping_dt) {
  const int nj = model.num_joints();
  if (tau.size() != nj) throw std::invalid_argument("forward_dynamics: tau size mismatch");
  check_finite(tau, "tau");
  check_finite(state.q, "q");
  check_finite(state.qd, "qd");
  const bool damped = joint_damping.size() > 0;
  if (damped && joint_damping.size() != nj)
    throw std::invalid_argument("forward_dynamics: joint_damping size mismatch");

  const TreeKinematics k = tree_kinematics(model, state);
  const std::vector<Vec6> f_ext = body_external_forces(model, k, ext);
  const int nb = model.num_bodies();

  std::vector<Mat6> IA(nb);
  std::vector<Vec6> pA(nb);
  for (int b = 0; b < nb; ++b) {
    IA[b] = k.inertia[b].matrix();
    pA[b] = spatial::cross_force(k.v[b], k.inertia[b].apply(k.v[b])) - f_ext[b];
  }

  std::vector<Vec6> U(nb, Vec6::Zero());
  std::vector<double> D(nb, 1.0), u(nb, 0.0);

  for (int b = nb - 1; b >= 1; --b) {
    const Vec6& S = k.S[b];
    U[b] = IA[b] * S;
    D[b] = S.dot(U[b]);
    u[b] = tau[b - 1] - S.dot(pA[b]);
    if (damped) {
      // viscous torque -d*qd with the velocity taken after the kick:
      // adds d*dt to the joint-space inertia
      u[b] -= joint_damping[b - 1] * state.qd[b - 1];
      D[b] += joint_damping[b - 1] * damping_dt;
    }
    const Mat6 Ia = IA[b] - U[b] * (U[b] / D[b]).transpose();
    const Vec6 pa = pA[b] + Ia * k.c[b] + U[b] * (u[b] / D[b]);
    const Mat6 X = k.X[b].motion_matrix();
    IA[k.parent[b]] += X.transpose() * Ia * X;
    pA[k.parent[b]] += k.X[b].transpose_apply_force(pa);
  }

  const Vec6 a0 = -IA[0].ldlt().solve(pA[0]);

  ForwardDynamicsResult res;
  res.qdd = VecX::Zero(nj);
  std::vector<Vec6> a(nb);
  a[0] = a0;
  for (int b = 1; b < nb; ++b) {
    Vec6 ab = k.X[b].apply_motion(a[k.parent[b]]) + k.c[b];
    const double qdd = (u[b] - U[b].dot(ab)) / D[b];
    res.qdd[b - 1] = qdd;
    a[b] = ab + k.S[b] * qdd;
  }

  // spatial -> classical acceleration of the base origin
  const Vec3 w_b = k.v[0].head<3>(), v_b = k.v[0].tail<3>();
  res.base_ang_acc = k.R[0] * a0.head<3>();
  res.base_lin_acc = k.R[0] * (a0.tail<3>() + w_b.cross(v_b));
  return res;
}

InverseDynamicsResult inverse_dynamics(const RobotModel& model, const SimState& state,
                                       const Vec3& base_lin_acc_des,
                                       const Vec3& base_ang_acc_des, const VecX& qdd_des,
                                       const ExternalForces& ext) {
  const int nj = model.num_joints();
  if (qdd_des.size() != nj) throw std::invalid_argument("inverse_dynamics: qdd size mismatch");
  check_finite(qdd_des, "qdd");
  check_finite(base_lin_acc_des, "base_lin_acc");
  check_finite(base_ang_acc_des, "base_ang_acc");
  check_finite(state.q, "q");
  check_finite(state.qd, "qd");

  const TreeKinematics k = tree_kinematics(model, state);
  const std::vector<Vec6> f_ext = body_external_forces(model, k, ext);
  const int nb = model.num_bodies();

  // classical -> spatial base acceleration
  const Vec3 w_b = k.v[0].head<3>(), v_b = k.v[0].tail<3>();
  std::vector<Vec6> a(nb);
  a[0] = spatial::motion(k.R[0].transpose() * base_ang_acc_des,
                         k.R[0].transpose() * base_lin_acc_des - w_b.cross(v_b));

  std::vector<Vec6> f(nb);
  f[0] = k.inertia[0].apply(a[0]) +
         spatial::cross_force(k.v[0], k.inertia[0].apply(k.v[0])) - f_ext[0];
  for (int b = 1; b < nb; ++b) {
    a[b] = k.X[b].apply_motion(a[k.parent[b]]) + k.c[b] + k.S[b] * qdd_des[b - 1];
    f[b] = k.inertia[b].apply(a[b]) +
           spatial::cross_force(k.v[b], k.inertia[b].apply(k.v[b])) - f_ext[b];
  }

  InverseDynamicsResult res;
  res.tau = VecX::Zero(nj);
  for (int b = nb - 1; b >= 1; --b) {
    res.tau[b - 1] = k.S[b].dot(f[b]);
    f[k.parent[b]] += k.X[b].transpose_apply_force(f[b]);
  }
  res.base_torque = k.R[0] * f[0].head<3>();
  res.base_force = k.R[0] * f[0].tail<3>();
  return res;
}

ContactSet foot_contact_forces(const RobotModel& model, const SimState& state,
                               const ContactParams& params) {
  ContactSet set;
  const TreeKinematics k = tree_kinematics(model, state);

  for (int s = 0; s < kNumFeet; ++s) {
    if (model.feet[s].contact_points.empty()) continue;
    const int body = model.feet[s].ankle_joint + 1;
    // world angular velocity / origin velocity of the foot body
    const Vec3 w_world = k.R[body] * k.v[body].head<3>();
    const Vec3 v_origin = k.R[body] * k.v[body].tail<3>();
    for (const Vec3& cp : model.feet[s].contact_points) {
      const Vec3 p_world = k.p[body] + k.R[body] * cp;
      if (p_world.z() >= 0.0) continue;
      const Vec3 v_point = v_origin + w_world.cross(p_world - k.p[body]);
      const double fn =
          std::max(0.0, -params.stiffness * p_world.z() - params.damping * v_point.z());
      Vec3 ft = -params.damping * Vec3(v_point.x(), v_point.y(), 0.0);
      const double ft_max = params.friction * fn;
      const double ft_norm = ft.norm();
      if (ft_norm > ft_max) ft *= ft_max / (ft_norm > 0.0 ? ft_norm : 1.0);
      ContactPoint point;
      point.foot = s;
      point.position = p_world;
      point.velocity = v_point;
      point.force = ft + Vec3(0.0, 0.0, fn);
      set.points.push_back(point);
      set.normal_force[s] += fn;
    }
    set.flags[s] = set.normal_force[s] > params.flag_threshold ? 1 : 0;
  }
  return set;
}

namespace {

ForwardDynamicsResult evaluate_forces(const RobotModel& model, const SimState& state,
                                      const VecX& tau, const Vec3& f_ext_base,
                                      const ContactParams& params, const VecX& joint_damping,
                                      double dt, ContactSet* contacts_out) {
  const ContactSet contacts = foot_contact_forces(model, state, params);
  ExternalForces ext(model.num_bodies());
  ext.force[0] += f_ext_base;
  const FrameSet frames =
      forward_kinematics(model, state.base_position, state.base_orientation, state.q);
  for (const ContactPoint& cp : contacts.points) {
    const int body = model.feet[cp.foot].ankle_joint + 1;
    ext.add_force_at_point(body, cp.force, cp.position, frames.body_position[body]);
  }
  if (contacts_out) *contacts_out = contacts;
  return forward_dynamics(model, state, tau, ext, joint_damping, dt);
}

}  // namespace

SimState step_physics(const RobotModel& model, const SimState& state, const VecX& tau,
                      const Vec3& f_ext_base, double dt, const ContactParams& params,
                      const VecX& joint_damping) {
  if (dt <= 0.0) throw std::invalid_argument("step_physics: dt must be positive");
  check_finite(f_ext_base, "f_ext");

  // leading half-kick from the stored accelerations (self-priming)
  VecX qdd_prev = state.qdd;
  Vec3 lin_acc_prev = state.base_lin_acc;
  Vec3 ang_acc_prev = state.base_ang_acc;
  if (!state.acc_valid) {
    const auto prime =
        evaluate_forces(model, state, tau, f_ext_base, params, joint_damping, dt, nullptr);
    qdd_prev = prime.qdd;
    lin_acc_prev = prime.base_lin_acc;
    ang_acc_prev = prime.base_ang_acc;
  }

  SimState next = state;
  next.qd = state.qd + 0.5 * dt * qdd_prev;
  next.base_lin_vel = state.base_lin_vel + 0.5 * dt * lin_acc_prev;
  next.base_ang_vel = state.base_ang_vel + 0.5 * dt * ang_acc_prev;

  // drift
  next.q = state.q + dt * next.qd;
  next.base_position = state.base_position + dt * next.base_lin_vel;
  const Vec3 rot_inc = dt * next.base_ang_vel;
  const double angle = rot_inc.norm();
  Quat dq = Quat::Identity();
  if (angle > 0.0) dq = Quat(Eigen::AngleAxisd(angle, rot_inc / angle));
  next.base_orientation = (dq * state.base_orientation).normalized();

  // force evaluation at the new positions, trailing half-kick
  ContactSet contacts;
  const ForwardDynamicsResult acc =
      evaluate_forces(model, next, tau, f_ext_base, params, joint_damping, dt, &contacts);
  next.qd += 0.5 * dt * acc.qdd;
  next.base_lin_vel += 0.5 * dt * acc.base_lin_acc;
  next.base_ang_vel += 0.5 * dt * acc.base_ang_acc;

  next.qdd = acc.qdd;
  next.base_lin_acc = acc.base_lin_acc;
  next.base_ang_acc = acc.base_ang_acc;
  next.acc_valid = true;

  for (int s = 0; s < kNumFeet; ++s) {
    const bool in_contact = contacts.flags[s] == 1;
    next.touchdown[s] = false;
    next.landed_air_time[s] = 0.0;
    if (in_contact) {
      if (state.air_time[s] > 0.0) {
        next.touchdown[s] = true;
        next.landed_air_time[s] = state.air_time[s];
      }
      next.air_time[s] = 0.0;
    } else {
      next.air_time[s] = state.air_time[s] + dt;
    }
    next.contact[s] = in_contact ? 1 : 0;
    next.contact_force[s] = contacts.normal_force[s];
  }
  next.time = state.time + dt;

  if (!next.q.allFinite() || !next.qd.allFinite() || !next.base_position.allFinite() ||
      !next.base_lin_vel.allFinite() || !next.base_ang_vel.allFinite()) {
    std::ostringstream os;
    os << "step_physics: non-finite state at t=" << next.time << "\n q=" << next.q.transpose()
       << "\n qd=" << next.qd.transpose() << "\n base_p=" << next.base_position.transpose()
       << "\n base_v=" << next.base_lin_vel.transpose();
    throw std::runtime_error(os.str());
  }
  return next;
}

double mechanical_energy(const RobotModel& model, const SimState& state) {
  const TreeKinematics k = tree_kinematics(model, state);
  double e = 0.0;
  for (int b = 0; b < model.num_bodies(); ++b) {
    e += 0.5 * k.v[b].dot(k.inertia[b].apply(k.v[b]));
    const double mass = b == 0 ? model.base.mass : model.links[b - 1].mass;
    const Vec3 com = b == 0 ? model.base.com : model.links[b - 1].com;
    const Vec3 com_world = k.p[b] + k.R[b] * com;
    e += mass * model.gravity * com_world.z();
  }
  return e;
}

Momentum system_momentum(const RobotModel& model, const SimState& state) {
  const TreeKinematics k = tree_kinematics(model, state);
  Momentum m;
  for (int b = 0; b < model.num_bodies(); ++b) {
    const Vec6 h = k.inertia[b].apply(k.v[b]);  // body coords, about body origin
    const Vec3 lin_world = k.R[b] * h.tail<3>();
    m.linear += lin_world;
    m.angular += k.R[b] * h.head<3>() + k.p[b].cross(lin_world);
  }
  return m;
}

Vec3 center_of_mass(const RobotModel& model, const SimState& state) {
  const TreeKinematics k = tree_kinematics(model, state);
  Vec3 weighted = model.base.mass * (k.p[0] + k.R[0] * model.base.com);
  for (int j = 0; j < model.num_joints(); ++j) {
    weighted += model.links[j].mass * (k.p[j + 1] + k.R[j + 1] * model.links[j].com);
  }
  return weighted / model.total_mass();
}

}  // namespace pwl
