#pragma once

#include <Eigen/Dense>

#include "artimanip/geometry.hpp"
#include "artimanip/task.hpp"

namespace artimanip {

/// Stage indicator exponents appear in the reward table as attenuation
/// (literal). The boosted interpretation replaces exponent 1_x by (1 - 1_x)
/// so that satisfied stages amplify instead of attenuate.
enum class RewardMode { literal, boosted };

/// Per-term weights; defaults reproduce the published reward table.
struct RewardWeights {
  double success = 40.0;
  double distance = 0.6;
  double object_state = 1.0;
  double grasp = 0.05;
  double energy = -0.05;
  double track_pos = 0.025;
  double track_rot = 0.004;
  double smoothness = -0.001;
  double y_reg = -0.005;
  double z_reg = -0.07;
};

/// Stage indicators: near (delta <= 0.05), near band (0.02 <= delta <= 0.08),
/// graspable (delta <= 0.015 and contact), success (q >= fraction * limit).
struct Indicators {
  bool near = false;       // 1_d
  bool near_band = false;  // 1_dy
  bool graspable = false;  // 1_g
  bool success = false;    // 1_s
};

Indicators compute_indicators(double delta, bool contact, double q_obj, double joint_limit,
                              const TaskSpec& task);

/// Weighted term contributions; total is their exact sum.
struct RewardBreakdown {
  double success = 0.0;
  double distance = 0.0;
  double object_state = 0.0;
  double grasp = 0.0;
  double energy = 0.0;
  double track_pos = 0.0;
  double track_rot = 0.0;
  double smoothness = 0.0;
  double y_reg = 0.0;
  double z_reg = 0.0;
  double total = 0.0;

  Eigen::VectorXd flatten() const;  // 11 numbers, total last
};

/// Everything the reward formulas read, evaluated for the post-step state.
struct RewardInputs {
  double delta = 0.0;                  // gripper-to-handle distance
  Indicators indicators;
  double q_obj = 0.0;
  double length_weight = 1.0;          // w_len
  Eigen::VectorXd action;              // 11, clipped
  Eigen::VectorXd prev_action;         // 11, clipped
  Vec3 command_position = Vec3::Zero();
  Quat command_orientation = Quat::Identity();
  Vec3 ee_position = Vec3::Zero();
  Quat ee_orientation = Quat::Identity();
  double energy_rate = 0.0;            // mean over substeps of sum_i sqrt(|F_i * v_i|)
};

RewardBreakdown compute_reward(const RewardInputs& in, const RewardWeights& weights,
                               RewardMode mode);

}  // namespace artimanip
