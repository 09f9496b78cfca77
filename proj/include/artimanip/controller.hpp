#pragma once

#include "artimanip/dynamics.hpp"
#include "artimanip/geometry.hpp"

namespace artimanip {

/// Diagonal Cartesian impedance gains. Constructed through critically_damped()
/// they satisfy D = 2*sqrt(M.*K) elementwise.
struct ImpedanceGains {
  Vec6 K = Vec6::Zero();
  Vec6 M = Vec6::Ones();
  Vec6 D = Vec6::Zero();

  static ImpedanceGains critically_damped(const Vec6& stiffness, const Vec6& inertia);
};

struct PoseSetpoint {
  Vec3 position = Vec3::Zero();
  Quat orientation = Quat::Identity();
  Vec6 velocity_feedforward = Vec6::Zero();
};

/// Maps the raw gain action into the controller stiffness range [60, 140]:
/// clip(a, -1, 1) * 40 + 100. Throws on NaN.
double scale_stiffness(double a_kp);

/// D_i = 2*sqrt(M_i*K_i). All entries must be positive.
Vec6 critical_damping(const Vec6& inertia, const Vec6& stiffness);

/// Axis-angle of R_desired * R_current^T, angle in (-pi, pi].
Vec3 orientation_error(const Quat& desired, const Quat& current);

/// Gram-Schmidt reconstruction of a rotation from its first two columns.
/// Throws std::invalid_argument on degenerate input.
Mat3 rot6d_to_matrix(const Vec6& r6);

/// First two columns of R, stacked column-major.
Vec6 matrix_to_rot6d(const Mat3& rotation);

/// PD wrench K*e + D*edot about the setpoint. In closed loop with step_free
/// this realizes the mass-spring-damper impedance model in free space.
Vec6 impedance_wrench(const EndEffectorState& ee, const PoseSetpoint& setpoint,
                      const ImpedanceGains& gains);

}  // namespace artimanip
