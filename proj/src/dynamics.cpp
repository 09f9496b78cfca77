#include "artimanip/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace artimanip {

namespace {

double hinge_sign(const ArticulatedObject& obj) { return obj.right_hinged ? -1.0 : 1.0; }

void check_q_range(const ArticulatedObject& obj, double q) {
  if (!(q >= 0.0 && q <= obj.joint.limit_max)) {
    throw std::domain_error("joint position outside [0, limit_max]");
  }
}

/// Clamp to [0, limit]; inelastic limit contact zeroes the velocity.
void clamp_joint(const JointSpec& joint, ObjectState& s) {
  if (s.q < 0.0) {
    s.q = 0.0;
    if (s.qdot < 0.0) s.qdot = 0.0;
  } else if (s.q > joint.limit_max) {
    s.q = joint.limit_max;
    if (s.qdot > 0.0) s.qdot = 0.0;
  }
}

}  // namespace

void JointSpec::validate() const {
  if (!(limit_max > 0.0)) throw std::invalid_argument("limit_max must be > 0");
  if (!(friction_b >= 0.0)) throw std::invalid_argument("friction_b must be >= 0");
  if (!(stiffness_k >= 0.0)) throw std::invalid_argument("stiffness_k must be >= 0");
  if (!(inertia_I > 0.0)) throw std::invalid_argument("inertia_I must be > 0");
  if (std::abs(axis.norm() - 1.0) > 1e-9) throw std::invalid_argument("axis must be unit length");
}

void ArticulatedObject::validate() const {
  joint.validate();
  if (joint.kind == JointKind::revolute) {
    const Vec3 d = handle_pose_closed.position - pivot_center;
    const double dist_to_axis = (d - joint.axis * joint.axis.dot(d)).norm();
    if (std::abs(dist_to_axis - pivot_radius) > 1e-6) {
      throw std::invalid_argument("handle distance to hinge axis does not match pivot_radius");
    }
  } else {
    if (pivot_center.norm() != 0.0 || pivot_radius != 0.0) {
      throw std::invalid_argument("prismatic objects must store zero pivot geometry");
    }
  }
}

Pose handle_pose(const ArticulatedObject& obj, double q) {
  check_q_range(obj, q);
  if (obj.joint.kind == JointKind::prismatic) {
    return Pose{obj.handle_pose_closed.position + q * obj.joint.axis,
                obj.handle_pose_closed.orientation};
  }
  const Quat rot = quat_from_rotvec(hinge_sign(obj) * q * obj.joint.axis);
  return Pose{obj.pivot_center + rot * (obj.handle_pose_closed.position - obj.pivot_center),
              (rot * obj.handle_pose_closed.orientation).normalized()};
}

Vec6 handle_jacobian(const ArticulatedObject& obj, double q) {
  check_q_range(obj, q);
  Vec6 jac = Vec6::Zero();
  if (obj.joint.kind == JointKind::prismatic) {
    jac.head<3>() = obj.joint.axis;
    return jac;
  }
  const Vec3 w = hinge_sign(obj) * obj.joint.axis;
  const Vec3 p = handle_pose(obj, q).position;
  jac.head<3>() = w.cross(p - obj.pivot_center);
  jac.tail<3>() = w;
  return jac;
}

EndEffectorState step_free(const EndEffectorState& ee, const Vec6& commanded_wrench,
                           const Vec6& inertia, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if ((inertia.array() <= 0.0).any()) throw std::invalid_argument("inertia must be positive");
  if (!commanded_wrench.allFinite()) throw std::runtime_error("non-finite wrench");

  EndEffectorState out = ee;
  const Vec6 accel = commanded_wrench.cwiseQuotient(inertia);
  out.linear_vel += accel.head<3>() * dt;
  out.angular_vel += accel.tail<3>() * dt;
  out.position += out.linear_vel * dt;
  out.orientation = (quat_from_rotvec(out.angular_vel * dt) * out.orientation).normalized();
  return out;
}

GraspedStepResult step_grasped(const ArticulatedObject& obj, const ObjectState& state,
                               const EndEffectorState& ee, const Vec6& commanded_wrench,
                               const Vec6& ee_inertia, double dt) {
  if (!ee.attached) throw std::logic_error("step_grasped requires an attached end-effector");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (!commanded_wrench.allFinite()) throw std::runtime_error("non-finite wrench");

  const JointSpec& joint = obj.joint;
  const Vec6 jac = handle_jacobian(obj, state.q);
  const double generalized_force = jac.dot(commanded_wrench);
  const double effective_inertia = joint.inertia_I + jac.dot(ee_inertia.cwiseProduct(jac));
  const double qddot =
      (generalized_force - joint.friction_b * state.qdot - joint.stiffness_k * state.q) /
      effective_inertia;

  ObjectState next{state.q, state.qdot + qddot * dt};
  next.q += next.qdot * dt;
  clamp_joint(joint, next);

  const Vec6 jac_new = handle_jacobian(obj, next.q);
  const Pose handle = handle_pose(obj, next.q);

  EndEffectorState ee_out = ee;
  ee_out.position = handle.position;
  ee_out.orientation = handle.orientation;
  ee_out.linear_vel = jac_new.head<3>() * next.qdot;
  ee_out.angular_vel = jac_new.tail<3>() * next.qdot;

  // Handle acceleration = J*qddot + Jdot*qdot; the second (centripetal) term
  // only exists for revolute joints, where dJ_lin/dq = w x J_lin.
  Vec6 ee_accel = jac_new * qddot;
  if (joint.kind == JointKind::revolute) {
    const Vec3 w = hinge_sign(obj) * joint.axis;
    ee_accel.head<3>() += w.cross(jac_new.head<3>()) * (next.qdot * next.qdot);
  }
  const Vec6 reaction = commanded_wrench - ee_inertia.cwiseProduct(ee_accel);

  return GraspedStepResult{next, ee_out, reaction};
}

bool grasp_contact(const EndEffectorState& ee, const Pose& handle, const GraspParams& params) {
  const Vec3 approach_ee = ee.orientation * Vec3::UnitX();
  const Vec3 approach_handle = handle.orientation * Vec3::UnitX();
  const double c = std::clamp(approach_ee.dot(approach_handle), -1.0, 1.0);
  return std::acos(c) <= params.cone_half_angle;
}

EndEffectorState update_grasp(const EndEffectorState& ee, const ArticulatedObject& obj,
                              const ObjectState& state, GripperCommand command,
                              double distance_to_handle, const GraspParams& params) {
  EndEffectorState out = ee;
  if (command == GripperCommand::open) {
    out.gripper_closed = false;
    out.attached = false;
    return out;
  }
  out.gripper_closed = true;
  if (out.attached) return out;  // idempotent
  if (distance_to_handle <= params.attach_distance &&
      grasp_contact(out, handle_pose(obj, state.q), params)) {
    out.attached = true;
  }
  return out;
}

ObjectState step_object_passive(const ArticulatedObject& obj, const ObjectState& state, double dt) {
  const JointSpec& joint = obj.joint;
  const double qddot =
      (-joint.friction_b * state.qdot - joint.stiffness_k * state.q) / joint.inertia_I;
  ObjectState next{state.q, state.qdot + qddot * dt};
  next.q += next.qdot * dt;
  clamp_joint(joint, next);
  return next;
}

}  // namespace artimanip
