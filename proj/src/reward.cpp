#include "artimanip/reward.hpp"

#include <cmath>
#include <stdexcept>

namespace artimanip {

namespace {

/// base^{1_x} as printed, or base^{1 - 1_x} in boosted mode.
double gate(bool indicator, double base, RewardMode mode) {
  const bool attenuate = (mode == RewardMode::literal) ? indicator : !indicator;
  return attenuate ? base : 1.0;
}

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

Indicators compute_indicators(double delta, bool contact, double q_obj, double joint_limit,
                              const TaskSpec& task) {
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be >= 0");
  Indicators ind;
  ind.near = delta <= 0.05;
  ind.near_band = delta >= 0.02 && delta <= 0.08;
  ind.graspable = delta <= 0.015 && contact;
  ind.success = q_obj >= task.success_fraction * joint_limit;
  return ind;
}

Eigen::VectorXd RewardBreakdown::flatten() const {
  Eigen::VectorXd v(11);
  v << success, distance, object_state, grasp, energy, track_pos, track_rot, smoothness, y_reg,
      z_reg, total;
  return v;
}

RewardBreakdown compute_reward(const RewardInputs& in, const RewardWeights& w, RewardMode mode) {
  const Indicators& ind = in.indicators;
  RewardBreakdown r;

  r.success = w.success * gate(ind.near, 0.05, mode) * gate(ind.graspable, 0.5, mode) *
              (ind.success ? 1.0 : 0.0);

  r.distance = w.distance * std::exp(-10.0 * 2.0 * std::sqrt(in.delta)) / 2.0 *
               gate(ind.graspable, 0.8, mode);

  r.object_state = w.object_state * in.q_obj * gate(ind.graspable, 0.5, mode) *
                   gate(ind.near, 0.5, mode) * in.length_weight;

  r.grasp = w.grasp * 0.2 * (ind.graspable ? 1.0 : 0.0);

  r.energy = w.energy * in.energy_rate * (ind.graspable ? 1.0 : 0.0);

  const double pos_err = (in.command_position - in.ee_position).norm();
  r.track_pos = w.track_pos * std::exp(-4.0 * pos_err) * (ind.near ? 1.0 : 0.0);

  const double rot_err = quat_angle(in.command_orientation, in.ee_orientation);
  r.track_rot = w.track_rot * std::exp(-4.0 * rot_err) * (ind.near ? 1.0 : 0.0);

  double flips = 0.0;
  for (int i = 0; i < in.action.size(); ++i) {
    if (sign_of(in.action(i)) != sign_of(in.prev_action(i))) {
      flips += std::abs(in.action(i) - in.prev_action(i));
    }
  }
  r.smoothness = w.smoothness * flips;

  const double ay = in.action(1) * 15.0;
  r.y_reg = w.y_reg * (ind.near_band ? 1.0 : 0.0) * ay * ay;

  const double az = in.action(2) * 15.0;
  r.z_reg = w.z_reg * (ind.graspable ? 1.0 : 0.0) * az * az;

  r.total = r.success + r.distance + r.object_state + r.grasp + r.energy + r.track_pos +
            r.track_rot + r.smoothness + r.y_reg + r.z_reg;
  return r;
}

}  // namespace artimanip
