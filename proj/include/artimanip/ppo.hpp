#pragma once

#include <cstdint>
#include <vector>

#include "artimanip/nets.hpp"
#include "artimanip/rng.hpp"

namespace artimanip {

struct PPOConfig {
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double clip_ratio = 0.2;
  int epochs = 4;
  int minibatches = 4;
  double learning_rate = 3e-4;
  bool lr_decay = true;
  double entropy_coef = 0.003;
  double value_coef = 0.5;
  int horizon = 64;                 // steps per env per update
  long long total_steps = 3000000;  // environment steps
  double lambda_ramp_frac = 0.2;    // distillation weight reaches 1 here
  double max_grad_norm = 0.5;
  bool normalize_advantages = true;
  bool normalize_observations = true;
  bool normalize_rewards = false;

  void validate() const;  // throws std::invalid_argument
};

/// Linear ramp 0 -> 1 over the first lambda_ramp_frac of total steps,
/// constant 1 afterwards.
double lambda_schedule(long long global_step, const PPOConfig& config);

/// Supervision-regularization loss lambda*|z - sg(z~)| + |sg(z) - z~|.
/// The value is (lambda + 1)*|z - z~|; dz carries only the first term,
/// dz_tilde only the second.
struct DistillResult {
  double value = 0.0;
  VectorXd dz;
  VectorXd dz_tilde;
};
DistillResult distill_loss(const VectorXd& z, const VectorXd& z_tilde, double lambda);

/// On-policy storage, one column per (env, step) sample.
class RolloutBuffer {
 public:
  RolloutBuffer(int num_envs, int horizon, const NetworkConfig& nets);

  int num_envs() const { return num_envs_; }
  int horizon() const { return horizon_; }
  int size() const { return num_envs_ * horizon_; }
  int col(int env, int t) const { return env * horizon_ + t; }

  MatrixXd obs;        // obs_dim x size
  MatrixXd priv;       // priv_dim x size
  MatrixXd a_prev;     // action_dim x size
  MatrixXd history;    // history_dim x size
  MatrixXd action;     // action_dim x size (raw samples)
  VectorXd log_prob;
  VectorXd value;
  VectorXd reward;
  std::vector<std::uint8_t> terminal;   // episode ended for real
  std::vector<std::uint8_t> truncated;  // episode cut at the time limit
  VectorXd bootstrap;                   // V(s') where truncated
  VectorXd final_value;                 // per env: V of the live state at buffer end

 private:
  int num_envs_;
  int horizon_;
};

struct GaeResult {
  VectorXd advantages;
  VectorXd returns;
};
GaeResult compute_gae(const RolloutBuffer& buffer, double gamma, double gae_lambda);

struct UpdateStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double distill = 0.0;
  double approx_kl = 0.0;
  double explained_variance = 0.0;
  double grad_norm = 0.0;
  double clip_fraction = 0.0;
};

/// One PPO update (epochs x minibatches) over the rollout. Optimizes actor,
/// critic, phi and sigma jointly; sigma receives gradient only from the
/// regularization half of the distillation loss. Throws std::runtime_error
/// on a non-finite training signal.
UpdateStats ppo_update(NetworkSet& nets, const RolloutBuffer& buffer, const GaeResult& gae,
                       const PPOConfig& config, double lambda, double learning_rate,
                       long long& adam_step, Rng& shuffle_rng);

}  // namespace artimanip
