#include "artimanip/controller.hpp"

#include <cmath>
#include <stdexcept>

namespace artimanip {

ImpedanceGains ImpedanceGains::critically_damped(const Vec6& stiffness, const Vec6& inertia) {
  ImpedanceGains g;
  g.K = stiffness;
  g.M = inertia;
  g.D = critical_damping(inertia, stiffness);
  return g;
}

double scale_stiffness(double a_kp) {
  if (std::isnan(a_kp)) throw std::invalid_argument("scale_stiffness: NaN input");
  return std::clamp(a_kp, -1.0, 1.0) * 40.0 + 100.0;
}

Vec6 critical_damping(const Vec6& inertia, const Vec6& stiffness) {
  if ((inertia.array() <= 0.0).any() || (stiffness.array() <= 0.0).any()) {
    throw std::invalid_argument("critical_damping: entries must be positive");
  }
  return 2.0 * inertia.cwiseProduct(stiffness).cwiseSqrt();
}

Vec3 orientation_error(const Quat& desired, const Quat& current) {
  return rotvec_from_quat(desired * current.conjugate());
}

Mat3 rot6d_to_matrix(const Vec6& r6) {
  const Vec3 a1 = r6.head<3>();
  const Vec3 a2 = r6.tail<3>();
  if (a1.norm() <= 1e-6) throw std::invalid_argument("rot6d: first column near zero");
  const Vec3 b1 = a1.normalized();
  const Vec3 ortho = a2 - a2.dot(b1) * b1;
  if (ortho.norm() <= 1e-6) throw std::invalid_argument("rot6d: columns near parallel");
  const Vec3 b2 = ortho.normalized();
  Mat3 rot;
  rot.col(0) = b1;
  rot.col(1) = b2;
  rot.col(2) = b1.cross(b2);
  return rot;
}

Vec6 matrix_to_rot6d(const Mat3& rotation) {
  Vec6 r6;
  r6.head<3>() = rotation.col(0);
  r6.tail<3>() = rotation.col(1);
  return r6;
}

Vec6 impedance_wrench(const EndEffectorState& ee, const PoseSetpoint& setpoint,
                      const ImpedanceGains& gains) {
  Vec6 error;
  error.head<3>() = setpoint.position - ee.position;
  error.tail<3>() = orientation_error(setpoint.orientation, ee.orientation);
  const Vec6 error_rate = setpoint.velocity_feedforward - ee.twist();
  return gains.K.cwiseProduct(error) + gains.D.cwiseProduct(error_rate);
}

}  // namespace artimanip
