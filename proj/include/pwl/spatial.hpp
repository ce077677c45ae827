#pragma once

#include <Eigen/Dense>

#include "pwl/model.hpp"

// 6D spatial vector algebra. Motion vectors are [angular; linear], force
// vectors [torque; force], both about the frame origin in frame coordinates.
namespace pwl::spatial {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

inline Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return s;
}

inline Vec6 motion(const Vec3& ang, const Vec3& lin) {
  Vec6 m;
  m << ang, lin;
  return m;
}

// Plucker motion transform from frame A to frame B, built from E (rotation
// mapping A coordinates to B coordinates) and r (origin of B expressed in A):
//   [w_B; v_B] = [E w_A; E (v_A - r x w_A)]
struct Transform {
  Mat3 E = Mat3::Identity();
  Vec3 r = Vec3::Zero();

  Vec6 apply_motion(const Vec6& m) const {
    const Vec3 w = m.head<3>();
    return motion(E * w, E * (m.tail<3>() - r.cross(w)));
  }

  // force vectors transform with the transpose of the motion matrix
  Vec6 transpose_apply_force(const Vec6& f_B) const {
    // f_A = X^T f_B
    const Vec3 n = E.transpose() * f_B.head<3>();
    const Vec3 f = E.transpose() * f_B.tail<3>();
    return motion(n + r.cross(f), f);
  }

  Mat6 motion_matrix() const {
    Mat6 x = Mat6::Zero();
    x.topLeftCorner<3, 3>() = E;
    x.bottomRightCorner<3, 3>() = E;
    x.bottomLeftCorner<3, 3>() = -E * skew(r);
    return x;
  }
};

// crm(v) m = [w x w2; w x v2 + v x w2]
inline Vec6 cross_motion(const Vec6& v, const Vec6& m) {
  const Vec3 w = v.head<3>(), vl = v.tail<3>();
  const Vec3 w2 = m.head<3>(), v2 = m.tail<3>();
  return motion(w.cross(w2), w.cross(v2) + vl.cross(w2));
}

// crf(v) f = [w x n + v x f; w x f]
inline Vec6 cross_force(const Vec6& v, const Vec6& f) {
  const Vec3 w = v.head<3>(), vl = v.tail<3>();
  const Vec3 n = f.head<3>(), fl = f.tail<3>();
  return motion(w.cross(n) + vl.cross(fl), w.cross(fl));
}

// Rigid-body spatial inertia about the frame origin: mass m, first moment
// h = m*c, rotational inertia I_O about the origin.
struct RigidInertia {
  double m = 0.0;
  Vec3 h = Vec3::Zero();
  Mat3 I = Mat3::Zero();

  static RigidInertia from_com(double mass, const Vec3& com, const Mat3& inertia_com) {
    RigidInertia ri;
    ri.m = mass;
    ri.h = mass * com;
    const Mat3 cx = skew(com);
    ri.I = inertia_com + mass * cx * cx.transpose();
    return ri;
  }

  Vec6 apply(const Vec6& v) const {
    const Vec3 w = v.head<3>(), vl = v.tail<3>();
    return motion(I * w + h.cross(vl), m * vl - h.cross(w));
  }

  Mat6 matrix() const {
    Mat6 x;
    x.topLeftCorner<3, 3>() = I;
    x.topRightCorner<3, 3>() = skew(h);
    x.bottomLeftCorner<3, 3>() = skew(h).transpose();
    x.bottomRightCorner<3, 3>() = m * Mat3::Identity();
    return x;
  }
};

}  // namespace pwl::spatial
