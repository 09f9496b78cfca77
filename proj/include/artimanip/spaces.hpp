#pragma once

#include <Eigen/Dense>

#include "artimanip/geometry.hpp"

namespace artimanip {

inline constexpr int kObservationDim = 30;
inline constexpr int kPrivilegedDim = 8;
inline constexpr int kActionDim = 11;
inline constexpr int kCommandDim = 9;
inline constexpr int kPartialActionDim = 5;  // dxyz (3), gripper, a_kp
inline constexpr int kHistoryLength = 10;
inline constexpr int kHistoryEntryDim = kObservationDim + kPartialActionDim;  // 35
inline constexpr int kLatentDim = 20;

/// Policy observation, fixed 30-number layout:
///   [ grasp target pose (3+4) | ee pose proxy (3+4) | handle distance (1)
///   | ee position (3) + ee 6D rotation (6) | graspable (1)
///   | noisy pivot (3) | noisy radius (1) | right-hinged (1) ]
struct Observation {
  Pose grasp_target;
  Pose ee_proxy;
  double handle_distance = 0.0;
  Vec3 ee_position = Vec3::Zero();
  Vec6 ee_rot6d = Vec6::Zero();
  double graspable = 0.0;
  Vec3 pivot_obs = Vec3::Zero();
  double radius_obs = 0.0;
  double right_hinged_obs = 0.0;

  Eigen::VectorXd flatten() const;
};

/// Simulator-only quantities, fixed 8-number layout:
///   [ pivot (3) | radius | inertia | stiffness | joint position | grasped ]
struct PrivilegedObservation {
  Vec3 pivot = Vec3::Zero();
  double radius = 0.0;
  double inertia = 0.0;
  double stiffness = 0.0;
  double joint_position = 0.0;
  double grasped = 0.0;

  Eigen::VectorXd flatten() const;
};

/// Raw policy action, 11 numbers: [ dxyz (3) | rot6d (6) | gripper | a_kp ].
/// Consumers clip every component to [-1, 1].
struct Action {
  Vec3 dxyz = Vec3::Zero();
  Vec6 rot6d = Vec6::Zero();
  double gripper = 0.0;
  double a_kp = 0.0;

  static Action from_vector(const Eigen::Ref<const Eigen::VectorXd>& v);
  Eigen::VectorXd flatten() const;
  Action clipped() const;
  /// The slice kept in the observation history: dxyz, gripper, a_kp.
  Eigen::Matrix<double, kPartialActionDim, 1> partial() const;
};

/// Scaled robot command, 9 numbers:
///   [ dxyz in meters (3) | target orientation quaternion (4) | gripper | kp ].
struct Command {
  Vec3 dxyz = Vec3::Zero();
  Quat target_orientation = Quat::Identity();
  double gripper_close = -1.0;  // >= 0 close, < 0 open
  double kp = 100.0;

  Eigen::VectorXd flatten() const;
};

}  // namespace artimanip
