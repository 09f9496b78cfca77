#pragma once

#include "artimanip/geometry.hpp"

namespace artimanip {

enum class JointKind { revolute, prismatic };

/// Parameters of the single object joint. Units are SI throughout:
/// revolute joints use rad, N*m*s/rad, N*m/rad, kg*m^2; prismatic joints
/// use m, N*s/m, N/m, kg.
struct JointSpec {
  JointKind kind = JointKind::revolute;
  Vec3 axis = Vec3::UnitZ();   // world frame, unit norm
  double limit_max = 1.0;      // joint range is [0, limit_max]
  double friction_b = 0.0;     // viscous friction
  double stiffness_k = 0.0;    // return spring toward q = 0
  double inertia_I = 1.0;      // effective joint-space inertia

  void validate() const;  // throws std::invalid_argument on bad parameters
};

/// One-DOF articulated object (door or drawer) with a graspable handle.
/// The handle frame convention: +x is the gripper approach direction.
struct ArticulatedObject {
  JointSpec joint;
  Pose base_pose;             // object body pose, bookkeeping only
  Vec3 pivot_center = Vec3::Zero();  // point on the hinge axis (revolute)
  double pivot_radius = 0.0;         // handle distance to hinge axis (revolute)
  bool right_hinged = false;
  Pose handle_pose_closed;           // handle pose at q = 0

  void validate() const;
};

struct ObjectState {
  double q = 0.0;
  double qdot = 0.0;
};

/// Task-space floating gripper. `attached` implies a rigid grasp of the
/// object handle; `attached` requires `gripper_closed`.
struct EndEffectorState {
  Vec3 position = Vec3::Zero();
  Quat orientation = Quat::Identity();
  Vec3 linear_vel = Vec3::Zero();
  Vec3 angular_vel = Vec3::Zero();
  bool gripper_closed = false;
  bool attached = false;

  Vec6 twist() const {
    Vec6 t;
    t.head<3>() = linear_vel;
    t.tail<3>() = angular_vel;
    return t;
  }
};

enum class GripperCommand { open, close };

/// Attachment rule parameters; defaults follow the distance threshold of the
/// graspability condition plus an approach-cone contact test.
struct GraspParams {
  double attach_distance = 0.015;      // m
  double cone_half_angle = 1.0471975511965976;  // 60 deg, rad
  double break_force = 80.0;           // N, linear reaction magnitude
};

/// Handle pose at joint position q. Revolute handles travel on a circle
/// around the hinge axis (mirrored for right-hinged objects); prismatic
/// handles translate along the joint axis. Throws std::domain_error for q
/// outside [0, limit_max].
Pose handle_pose(const ArticulatedObject& obj, double q);

/// d(handle twist)/d(qdot): (axis, 0) for prismatic, (w x r, w) for revolute
/// with w the signed hinge axis.
Vec6 handle_jacobian(const ArticulatedObject& obj, double q);

/// Free-space semi-implicit Euler step of the gripper under a commanded
/// wrench. `inertia` is the diagonal 6-D inertia (kg x3, kg*m^2 x3).
EndEffectorState step_free(const EndEffectorState& ee, const Vec6& commanded_wrench,
                           const Vec6& inertia, double dt);

struct GraspedStepResult {
  ObjectState object;
  EndEffectorState ee;
  Vec6 reaction_wrench;  // commanded wrench minus the part accelerating the ee
};

/// Reduced-coordinate step of the rigidly grasped object + gripper system.
/// The gripper pose is snapped onto the handle after the joint update.
/// Requires ee.attached.
GraspedStepResult step_grasped(const ArticulatedObject& obj, const ObjectState& state,
                               const EndEffectorState& ee, const Vec6& commanded_wrench,
                               const Vec6& ee_inertia, double dt);

/// Approach-cone contact test: gripper approach axis (+x) within the cone
/// around the handle approach axis.
bool grasp_contact(const EndEffectorState& ee, const Pose& handle, const GraspParams& params);

/// Attachment update. Close attaches when within attach_distance and the
/// contact test passes; open always detaches. Attachment is idempotent.
EndEffectorState update_grasp(const EndEffectorState& ee, const ArticulatedObject& obj,
                              const ObjectState& state, GripperCommand command,
                              double distance_to_handle, const GraspParams& params);

/// Passive object step (no grasp): spring + friction only.
ObjectState step_object_passive(const ArticulatedObject& obj, const ObjectState& state, double dt);

}  // namespace artimanip
