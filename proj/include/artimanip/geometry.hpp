#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace artimanip {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;

/// Rigid transform: rotation stored as a unit quaternion.
struct Pose {
  Vec3 position = Vec3::Zero();
  Quat orientation = Quat::Identity();

  static Pose identity() { return Pose{}; }

  Vec3 apply(const Vec3& p) const { return position + orientation * p; }

  Pose compose(const Pose& other) const {
    return Pose{position + orientation * other.position,
                (orientation * other.orientation).normalized()};
  }

  Pose inverse() const {
    Quat qi = orientation.conjugate();
    return Pose{qi * (-position), qi};
  }
};

/// Exponential map so(3) -> SO(3). Safe near zero.
inline Quat quat_from_rotvec(const Vec3& w) {
  const double angle = w.norm();
  if (angle < 1e-12) {
    Quat q(1.0, 0.5 * w.x(), 0.5 * w.y(), 0.5 * w.z());
    return q.normalized();
  }
  return Quat(Eigen::AngleAxisd(angle, w / angle));
}

/// Log map SO(3) -> so(3); returned angle lies in [0, pi].
inline Vec3 rotvec_from_quat(const Quat& q) {
  Eigen::AngleAxisd aa(q.normalized());
  double angle = aa.angle();
  Vec3 axis = aa.axis();
  if (angle > M_PI) {  // AngleAxis may return angle in (pi, 2*pi) for some inputs
    angle = 2.0 * M_PI - angle;
    axis = -axis;
  }
  return angle * axis;
}

/// Geodesic angle between two orientations, in [0, pi].
inline double quat_angle(const Quat& a, const Quat& b) {
  return rotvec_from_quat(a * b.conjugate()).norm();
}

inline bool is_finite(const Eigen::Ref<const Eigen::VectorXd>& v) {
  return v.allFinite();
}

}  // namespace artimanip
