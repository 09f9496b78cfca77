#pragma once

#include <cstdint>
#include <optional>

#include "artimanip/controller.hpp"
#include "artimanip/dynamics.hpp"
#include "artimanip/reward.hpp"
#include "artimanip/rng.hpp"
#include "artimanip/spaces.hpp"
#include "artimanip/task.hpp"

namespace artimanip {

/// Episode-level randomization ranges. Zero ranges (or lo == hi == 1 for the
/// multipliers) reproduce the canonical object exactly.
struct RandomizationConfig {
  double object_xy = 0.10;                 // +- m
  double object_yaw = 0.2617993877991494;  // +- rad (15 deg)
  double friction_lo = 0.5, friction_hi = 2.0;
  double stiffness_lo = 0.0, stiffness_hi = 2.0;
  double mass_lo = 0.5, mass_hi = 2.0;
  double grasp_sigma_y = 0.01, grasp_sigma_z = 0.01;  // m, handle frame
  double grasp_cone = 0.2617993877991494;             // rad half-angle
  double pivot_obs_noise = 0.02;                      // +- m per axis
  double radius_obs_noise = 0.02;                     // +- m
  bool randomize_hinge_side = true;

  static RandomizationConfig none();
};

/// Train episodes draw every uniform parameter from the inner 80% of its
/// range; held-out episodes draw from the full range (tails included).
enum class SamplingMode { train, heldout };

struct DoorParams {
  Vec3 hinge_position = Vec3(0.55, -0.35, 0.50);  // left-hinged canonical
  double radius = 0.45;
  double limit = 1.5707963267948966;  // rad
  double friction = 0.8;              // N*m*s/rad
  double stiffness = 0.6;             // N*m/rad
  double inertia = 1.2;               // kg*m^2
};

struct DrawerParams {
  Vec3 handle_position = Vec3(0.52, 0.0, 0.50);
  double limit = 0.35;   // m
  double friction = 12.0;  // N*s/m
  double stiffness = 4.0;  // N/m
  double mass = 4.0;       // kg
};

struct EnvConfig {
  double physics_dt = 0.005;
  int decimation = 10;            // control at 20 Hz
  double action_pos_scale = 0.015;  // m per control step and axis
  Vec3 home_position = Vec3(0.0, 0.0, 0.50);
  Vec6 ee_inertia = (Vec6() << 1.5, 1.5, 1.5, 0.06, 0.06, 0.06).finished();
  double rot_stiffness_ratio = 0.25;  // rotational kp = kp * ratio
  GraspParams grasp;
  bool end_episode_on_grasp_break = true;
  DoorParams door;
  DrawerParams drawer;
  RandomizationConfig randomization;
  RewardWeights reward_weights;
  RewardMode reward_mode = RewardMode::boosted;
  SamplingMode sampling = SamplingMode::train;
  bool fixed_gains = false;          // ablation: stiff position tracking
  double fixed_gain_stiffness = 4000.0;
};

struct StepInfo {
  bool success = false;
  bool timeout = false;
  bool grasp_broken = false;
  bool rot6d_fallback = false;
  bool attached = false;
  bool newly_attached = false;
  double kp = 0.0;
  double handle_distance = 0.0;
  double reaction_force_max = 0.0;
  int steps = 0;
};

struct StepResult {
  Observation obs;
  RewardBreakdown reward;
  bool done = false;
  StepInfo info;
};

/// Builds the command from a raw action: components clipped to [-1, 1],
/// position delta scaled, 6D rotation orthonormalized (falling back to
/// `previous_orientation` on degenerate input), gripper thresholded at 0,
/// gain through scale_stiffness.
struct ScaledAction {
  Command command;
  bool rot6d_fallback = false;
};
ScaledAction scale_action(const Action& action, double pos_scale, const Quat& previous_orientation);

/// The manipulation task: reduced-order door/drawer plus a floating gripper
/// driven by the impedance controller. One instance is single-context.
class Environment {
 public:
  Environment(const EnvConfig& config, const TaskSpec& task);

  /// Samples a new episode. Same seed => bitwise identical episode.
  Observation reset(std::uint64_t seed);

  /// Scales a raw action and records it for the next step's reward terms.
  Command prepare_action(const Action& action);

  /// Advances one control step (decimation * physics_dt seconds). Throws if
  /// the episode already ended.
  StepResult step(const Command& command);

  Observation observation() const;
  PrivilegedObservation privileged() const;

  const ArticulatedObject& object() const { return object_; }
  const ObjectState& object_state() const { return object_state_; }
  const EndEffectorState& ee() const { return ee_; }
  const TaskSpec& task() const { return task_; }
  const EnvConfig& config() const { return config_; }
  double joint_limit() const { return object_.joint.limit_max; }
  bool alive() const { return alive_; }
  int steps_taken() const { return steps_; }
  double handle_distance() const;

 private:
  ImpedanceGains gains_for(double kp) const;
  void build_object(Rng& rng);
  double sample_uniform(Rng& rng, double lo, double hi) const;

  EnvConfig config_;
  TaskSpec task_;
  ArticulatedObject object_;
  ObjectState object_state_;
  EndEffectorState ee_;
  Pose grasp_target_;       // first-frame noised grasp pose, frozen
  Vec3 pivot_obs_ = Vec3::Zero();   // frozen noisy copies
  double radius_obs_ = 0.0;
  Rng rng_;
  Eigen::VectorXd pending_action_;  // clipped action awaiting its step
  Eigen::VectorXd prev_action_;
  Quat last_commanded_orientation_ = Quat::Identity();
  bool pending_rot6d_fallback_ = false;
  int steps_ = 0;
  bool alive_ = false;
};

/// Uniform y/z position offset in the handle frame plus a rotation sampled
/// inside a spherical cone (uniform axis, uniform angle up to the half-angle).
Pose randomize_grasp_pose(const Pose& true_handle_pose, Rng& rng,
                          const RandomizationConfig& config);

}  // namespace artimanip
