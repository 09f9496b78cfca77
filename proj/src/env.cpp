#include "artimanip/env.hpp"

#include <cmath>
#include <stdexcept>

namespace artimanip {

RandomizationConfig RandomizationConfig::none() {
  RandomizationConfig r;
  r.object_xy = 0.0;
  r.object_yaw = 0.0;
  r.friction_lo = r.friction_hi = 1.0;
  r.stiffness_lo = r.stiffness_hi = 1.0;
  r.mass_lo = r.mass_hi = 1.0;
  r.grasp_sigma_y = r.grasp_sigma_z = 0.0;
  r.grasp_cone = 0.0;
  r.pivot_obs_noise = 0.0;
  r.radius_obs_noise = 0.0;
  r.randomize_hinge_side = false;
  return r;
}

ScaledAction scale_action(const Action& action, double pos_scale,
                          const Quat& previous_orientation) {
  if (!action.flatten().allFinite()) throw std::invalid_argument("non-finite action");
  const Action a = action.clipped();
  ScaledAction out;
  out.command.dxyz = a.dxyz * pos_scale;
  try {
    out.command.target_orientation = Quat(rot6d_to_matrix(a.rot6d)).normalized();
  } catch (const std::invalid_argument&) {
    out.command.target_orientation = previous_orientation;
    out.rot6d_fallback = true;
  }
  out.command.gripper_close = a.gripper >= 0.0 ? 1.0 : -1.0;
  out.command.kp = scale_stiffness(a.a_kp);
  return out;
}

Environment::Environment(const EnvConfig& config, const TaskSpec& task)
    : config_(config), task_(task) {
  pending_action_ = Eigen::VectorXd::Zero(kActionDim);
  prev_action_ = Eigen::VectorXd::Zero(kActionDim);
}

double Environment::sample_uniform(Rng& rng, double lo, double hi) const {
  double u = rng.uniform();
  if (config_.sampling == SamplingMode::train) u = 0.1 + 0.8 * u;  // inner 80%
  return lo + (hi - lo) * u;
}

namespace {

Vec3 rotate_about(const Vec3& p, const Vec3& anchor, const Quat& rot) {
  return anchor + rot * (p - anchor);
}

}  // namespace

void Environment::build_object(Rng& rng) {
  const RandomizationConfig& rand = config_.randomization;
  const double dx = sample_uniform(rng, -rand.object_xy, rand.object_xy);
  const double dy = sample_uniform(rng, -rand.object_xy, rand.object_xy);
  const double yaw = sample_uniform(rng, -rand.object_yaw, rand.object_yaw);
  const bool right_hinged =
      task_.is_door() && rand.randomize_hinge_side ? rng.bernoulli(0.5) : false;
  const double friction_mult = sample_uniform(rng, rand.friction_lo, rand.friction_hi);
  const double stiffness_mult = sample_uniform(rng, rand.stiffness_lo, rand.stiffness_hi);
  const double mass_mult = sample_uniform(rng, rand.mass_lo, rand.mass_hi);

  const Quat yaw_rot = quat_from_rotvec(Vec3(0.0, 0.0, yaw));
  const Vec3 offset(dx, dy, 0.0);

  ArticulatedObject obj;
  if (task_.is_door()) {
    const DoorParams& door = config_.door;
    Vec3 hinge = door.hinge_position;
    double handle_dir = 1.0;  // handle sits on the non-hinge side
    if (right_hinged) {
      hinge.y() = -hinge.y();
      handle_dir = -1.0;
    }
    const Vec3 anchor(hinge.x(), 0.0, hinge.z());
    Vec3 handle = hinge + Vec3(0.0, handle_dir * door.radius, 0.0);

    obj.joint.kind = JointKind::revolute;
    obj.joint.axis = Vec3::UnitZ();
    obj.joint.limit_max = door.limit;
    obj.joint.friction_b = door.friction * friction_mult;
    obj.joint.stiffness_k = door.stiffness * stiffness_mult;
    obj.joint.inertia_I = door.inertia * mass_mult;
    obj.right_hinged = right_hinged;
    obj.pivot_center = rotate_about(hinge, anchor, yaw_rot) + offset;
    obj.pivot_radius = door.radius;
    obj.handle_pose_closed.position = rotate_about(handle, anchor, yaw_rot) + offset;
    obj.handle_pose_closed.orientation = yaw_rot;
    obj.base_pose = Pose{anchor + offset, yaw_rot};
  } else {
    const DrawerParams& drawer = config_.drawer;
    const Vec3 anchor(drawer.handle_position.x(), 0.0, drawer.handle_position.z());
    obj.joint.kind = JointKind::prismatic;
    obj.joint.axis = yaw_rot * Vec3(-1.0, 0.0, 0.0);  // opens toward the robot
    obj.joint.limit_max = drawer.limit;
    obj.joint.friction_b = drawer.friction * friction_mult;
    obj.joint.stiffness_k = drawer.stiffness * stiffness_mult;
    obj.joint.inertia_I = drawer.mass * mass_mult;
    obj.pivot_center = Vec3::Zero();
    obj.pivot_radius = 0.0;
    obj.right_hinged = false;
    obj.handle_pose_closed.position = rotate_about(drawer.handle_position, anchor, yaw_rot) + offset;
    obj.handle_pose_closed.orientation = yaw_rot;
    obj.base_pose = Pose{anchor + offset, yaw_rot};
  }
  obj.validate();
  object_ = obj;
}

Pose randomize_grasp_pose(const Pose& true_handle_pose, Rng& rng,
                          const RandomizationConfig& config) {
  const double oy = rng.uniform(-config.grasp_sigma_y, config.grasp_sigma_y);
  const double oz = rng.uniform(-config.grasp_sigma_z, config.grasp_sigma_z);
  // Uniform axis on the sphere, uniform angle within the cone half-angle.
  const double z = rng.uniform(-1.0, 1.0);
  const double phi = rng.uniform(0.0, 2.0 * M_PI);
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  const Vec3 axis(s * std::cos(phi), s * std::sin(phi), z);
  const double angle = rng.uniform(0.0, config.grasp_cone);

  Pose out;
  out.position = true_handle_pose.position + true_handle_pose.orientation * Vec3(0.0, oy, oz);
  out.orientation = (quat_from_rotvec(angle * axis) * true_handle_pose.orientation).normalized();
  return out;
}

Observation Environment::reset(std::uint64_t seed) {
  rng_.seed(seed);
  build_object(rng_);

  pivot_obs_ = object_.pivot_center;
  radius_obs_ = object_.pivot_radius;
  const RandomizationConfig& rand = config_.randomization;
  for (int i = 0; i < 3; ++i) {
    pivot_obs_(i) += sample_uniform(rng_, -rand.pivot_obs_noise, rand.pivot_obs_noise);
  }
  radius_obs_ += sample_uniform(rng_, -rand.radius_obs_noise, rand.radius_obs_noise);

  grasp_target_ = randomize_grasp_pose(object_.handle_pose_closed, rng_, rand);

  object_state_ = ObjectState{};
  ee_ = EndEffectorState{};
  ee_.position = config_.home_position;
  ee_.orientation = Quat::Identity();

  pending_action_.setZero();
  prev_action_.setZero();
  last_commanded_orientation_ = ee_.orientation;
  pending_rot6d_fallback_ = false;
  steps_ = 0;
  alive_ = true;
  return observation();
}

Command Environment::prepare_action(const Action& action) {
  ScaledAction scaled = scale_action(action, config_.action_pos_scale, last_commanded_orientation_);
  pending_action_ = action.clipped().flatten();
  pending_rot6d_fallback_ = scaled.rot6d_fallback;
  if (!scaled.rot6d_fallback) last_commanded_orientation_ = scaled.command.target_orientation;
  return scaled.command;
}

ImpedanceGains Environment::gains_for(double kp) const {
  Vec6 stiffness;
  if (config_.fixed_gains) {
    const double k = config_.fixed_gain_stiffness;
    stiffness << k, k, k, k * config_.rot_stiffness_ratio, k * config_.rot_stiffness_ratio,
        k * config_.rot_stiffness_ratio;
  } else {
    const double kr = kp * config_.rot_stiffness_ratio;
    stiffness << kp, kp, kp, kr, kr, kr;
  }
  return ImpedanceGains::critically_damped(stiffness, config_.ee_inertia);
}

double Environment::handle_distance() const {
  return (ee_.position - handle_pose(object_, object_state_.q).position).norm();
}

StepResult Environment::step(const Command& command) {
  if (!alive_) throw std::logic_error("step() called on finished episode");

  PoseSetpoint setpoint;
  setpoint.position = ee_.position + command.dxyz;
  setpoint.orientation = command.target_orientation;
  const ImpedanceGains gains = gains_for(command.kp);

  double energy_acc = 0.0;
  double reaction_max = 0.0;
  bool grasp_broken = false;
  for (int k = 0; k < config_.decimation; ++k) {
    const Vec6 wrench = impedance_wrench(ee_, setpoint, gains);
    if (ee_.attached) {
      GraspedStepResult res =
          step_grasped(object_, object_state_, ee_, wrench, config_.ee_inertia, config_.physics_dt);
      object_state_ = res.object;
      ee_ = res.ee;
      const double reaction = res.reaction_wrench.head<3>().norm();
      reaction_max = std::max(reaction_max, reaction);
      if (reaction > config_.grasp.break_force) {
        ee_.attached = false;
        grasp_broken = true;
      }
    } else {
      ee_ = step_free(ee_, wrench, config_.ee_inertia, config_.physics_dt);
      object_state_ = step_object_passive(object_, object_state_, config_.physics_dt);
    }
    const Vec6 twist = ee_.twist();
    double rate = 0.0;
    for (int i = 0; i < 6; ++i) rate += std::sqrt(std::abs(wrench(i) * twist(i)));
    energy_acc += rate;
  }

  const bool was_attached = ee_.attached;
  const GripperCommand gripper =
      command.gripper_close >= 0.0 ? GripperCommand::close : GripperCommand::open;
  if (!grasp_broken || gripper == GripperCommand::open) {
    ee_ = update_grasp(ee_, object_, object_state_, gripper, handle_distance(), config_.grasp);
  }
  const bool newly_attached = !was_attached && ee_.attached;
  if (newly_attached) {
    const Pose handle = handle_pose(object_, object_state_.q);
    const Vec6 jac = handle_jacobian(object_, object_state_.q);
    ee_.position = handle.position;
    ee_.orientation = handle.orientation;
    ee_.linear_vel = jac.head<3>() * object_state_.qdot;
    ee_.angular_vel = jac.tail<3>() * object_state_.qdot;
  }

  steps_ += 1;

  const double delta = handle_distance();
  const bool contact = grasp_contact(ee_, handle_pose(object_, object_state_.q), config_.grasp);
  const Indicators indicators =
      compute_indicators(delta, contact, object_state_.q, object_.joint.limit_max, task_);

  RewardInputs rin;
  rin.delta = delta;
  rin.indicators = indicators;
  rin.q_obj = object_state_.q;
  rin.length_weight =
      static_cast<double>(task_.episode_steps - (steps_ - 1)) / task_.episode_steps;
  rin.action = pending_action_;
  rin.prev_action = prev_action_;
  rin.command_position = setpoint.position;
  rin.command_orientation = setpoint.orientation;
  rin.ee_position = ee_.position;
  rin.ee_orientation = ee_.orientation;
  rin.energy_rate = energy_acc / config_.decimation;
  const RewardBreakdown reward = compute_reward(rin, config_.reward_weights, config_.reward_mode);

  prev_action_ = pending_action_;
  pending_action_.setZero();

  StepInfo info;
  info.success = indicators.success;
  info.timeout = steps_ >= task_.episode_steps;
  info.grasp_broken = grasp_broken;
  info.rot6d_fallback = pending_rot6d_fallback_;
  info.attached = ee_.attached;
  info.newly_attached = newly_attached;
  info.kp = command.kp;
  info.handle_distance = delta;
  info.reaction_force_max = reaction_max;
  info.steps = steps_;
  pending_rot6d_fallback_ = false;

  const bool done = info.success || info.timeout ||
                    (grasp_broken && config_.end_episode_on_grasp_break);
  alive_ = !done;

  StepResult result{observation(), reward, done, info};
  // Dimension contract, checked on every step.
  if (result.obs.flatten().size() != kObservationDim ||
      privileged().flatten().size() != kPrivilegedDim) {
    throw std::logic_error("observation dimension contract violated");
  }
  return result;
}

Observation Environment::observation() const {
  Observation obs;
  obs.grasp_target = grasp_target_;
  obs.ee_proxy = Pose{ee_.position, ee_.orientation};
  obs.handle_distance = handle_distance();
  obs.ee_position = ee_.position;
  obs.ee_rot6d = matrix_to_rot6d(ee_.orientation.toRotationMatrix());
  const bool contact = grasp_contact(ee_, handle_pose(object_, object_state_.q), config_.grasp);
  const Indicators ind =
      compute_indicators(obs.handle_distance, contact, object_state_.q, object_.joint.limit_max,
                         task_);
  obs.graspable = ind.graspable ? 1.0 : 0.0;
  obs.pivot_obs = pivot_obs_;
  obs.radius_obs = radius_obs_;
  obs.right_hinged_obs = object_.right_hinged ? 1.0 : 0.0;
  return obs;
}

PrivilegedObservation Environment::privileged() const {
  PrivilegedObservation priv;
  priv.pivot = object_.pivot_center;
  priv.radius = object_.pivot_radius;
  priv.inertia = object_.joint.inertia_I;
  priv.stiffness = object_.joint.stiffness_k;
  priv.joint_position = object_state_.q;
  priv.grasped = ee_.attached ? 1.0 : 0.0;
  return priv;
}

}  // namespace artimanip
