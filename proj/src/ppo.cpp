#include "artimanip/ppo.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace artimanip {

void PPOConfig::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma out of range");
  if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0)) throw std::invalid_argument("gae_lambda out of range");
  if (!(clip_ratio > 0.0)) throw std::invalid_argument("clip_ratio must be > 0");
  if (epochs < 1 || minibatches < 1) throw std::invalid_argument("epochs/minibatches must be >= 1");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (total_steps < 1) throw std::invalid_argument("total_steps must be >= 1");
  if (!(lambda_ramp_frac >= 0.0 && lambda_ramp_frac <= 1.0))
    throw std::invalid_argument("lambda_ramp_frac out of range");
}

double lambda_schedule(long long global_step, const PPOConfig& config) {
  if (global_step < 0) throw std::invalid_argument("global_step must be >= 0");
  const double ramp_end =
      std::max(1.0, config.lambda_ramp_frac * static_cast<double>(config.total_steps));
  return std::min(1.0, static_cast<double>(global_step) / ramp_end);
}

DistillResult distill_loss(const VectorXd& z, const VectorXd& z_tilde, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  if (z.size() != z_tilde.size()) throw std::invalid_argument("latent dim mismatch");
  DistillResult out;
  const VectorXd diff = z - z_tilde;
  const double norm = diff.norm();
  out.value = (lambda + 1.0) * norm;
  if (norm > 1e-12) {
    out.dz = lambda * diff / norm;    // supervision term: trains phi
    out.dz_tilde = -diff / norm;      // regularization term: trains sigma
  } else {
    out.dz = VectorXd::Zero(z.size());
    out.dz_tilde = VectorXd::Zero(z.size());
  }
  return out;
}

RolloutBuffer::RolloutBuffer(int num_envs, int horizon, const NetworkConfig& nets)
    : num_envs_(num_envs), horizon_(horizon) {
  const int n = num_envs * horizon;
  obs.resize(nets.obs_dim, n);
  priv.resize(nets.priv_dim, n);
  a_prev.resize(nets.action_dim, n);
  history.resize(nets.history_entry_dim() * nets.history_len, n);
  action.resize(nets.action_dim, n);
  log_prob.resize(n);
  value.resize(n);
  reward.resize(n);
  terminal.assign(n, 0);
  truncated.assign(n, 0);
  bootstrap = VectorXd::Zero(n);
  final_value = VectorXd::Zero(num_envs);
}

GaeResult compute_gae(const RolloutBuffer& buffer, double gamma, double gae_lambda) {
  GaeResult out;
  const int n = buffer.size();
  out.advantages.resize(n);
  out.returns.resize(n);
  for (int e = 0; e < buffer.num_envs(); ++e) {
    double carry = 0.0;
    for (int t = buffer.horizon() - 1; t >= 0; --t) {
      const int idx = buffer.col(e, t);
      double next_value = 0.0;
      bool boundary = true;
      if (buffer.terminal[idx]) {
        next_value = 0.0;
      } else if (buffer.truncated[idx]) {
        next_value = buffer.bootstrap(idx);
      } else {
        next_value = (t == buffer.horizon() - 1) ? buffer.final_value(e)
                                                 : buffer.value(buffer.col(e, t + 1));
        boundary = false;
      }
      const double delta = buffer.reward(idx) + gamma * next_value - buffer.value(idx);
      carry = delta + (boundary ? 0.0 : gamma * gae_lambda * carry);
      out.advantages(idx) = carry;
      out.returns(idx) = carry + buffer.value(idx);
    }
  }
  return out;
}

namespace {

double global_grad_norm(const std::vector<Tensor*>& params) {
  double sq = 0.0;
  for (const Tensor* t : params) sq += t->grad.squaredNorm();
  return std::sqrt(sq);
}

void adam_step(std::vector<Tensor*>& params, double lr, long long t) {
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t));
  for (Tensor* p : params) {
    p->adam_m = b1 * p->adam_m + (1.0 - b1) * p->grad;
    p->adam_v = b2 * p->adam_v + (1.0 - b2) * p->grad.cwiseProduct(p->grad);
    p->value.array() -=
        lr * (p->adam_m.array() / c1) / ((p->adam_v.array() / c2).sqrt() + eps);
  }
}

}  // namespace

UpdateStats ppo_update(NetworkSet& nets, const RolloutBuffer& buffer, const GaeResult& gae,
                       const PPOConfig& config, double lambda, double learning_rate,
                       long long& adam_step_count, Rng& shuffle_rng) {
  const NetworkConfig& nc = nets.config();
  const int n = buffer.size();
  const int action_dim = nc.action_dim;

  VectorXd advantages = gae.advantages;
  if (config.normalize_advantages && n > 1) {
    const double mean = advantages.mean();
    const double stddev =
        std::sqrt((advantages.array() - mean).square().sum() / static_cast<double>(n)) + 1e-8;
    advantages = (advantages.array() - mean) / stddev;
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  std::vector<Tensor*> params = nets.parameters();
  UpdateStats stats;
  int passes = 0;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    // Fisher-Yates from the dedicated shuffle stream.
    for (int i = n - 1; i > 0; --i) {
      const int j = static_cast<int>(shuffle_rng.index(static_cast<std::uint64_t>(i + 1)));
      std::swap(order[i], order[j]);
    }
    const int mb_count = config.minibatches;
    for (int mb = 0; mb < mb_count; ++mb) {
      const int lo = static_cast<int>(static_cast<long long>(n) * mb / mb_count);
      const int hi = static_cast<int>(static_cast<long long>(n) * (mb + 1) / mb_count);
      const int b = hi - lo;
      if (b <= 0) continue;

      MatrixXd mb_obs(nc.obs_dim, b), mb_priv(nc.priv_dim, b), mb_aprev(action_dim, b),
          mb_hist(buffer.history.rows(), b), mb_action(action_dim, b);
      VectorXd mb_logp_old(b), mb_adv(b), mb_ret(b);
      for (int k = 0; k < b; ++k) {
        const int idx = order[lo + k];
        mb_obs.col(k) = buffer.obs.col(idx);
        mb_priv.col(k) = buffer.priv.col(idx);
        mb_aprev.col(k) = buffer.a_prev.col(idx);
        mb_hist.col(k) = buffer.history.col(idx);
        mb_action.col(k) = buffer.action.col(idx);
        mb_logp_old(k) = buffer.log_prob(idx);
        mb_adv(k) = advantages(idx);
        mb_ret(k) = gae.returns(idx);
      }

      for (Tensor* p : params) p->zero_grad();

      MatrixXd z, z_tilde;
      MatrixXd actor_in(nc.actor_input_dim(), b);
      actor_in.topRows(nc.obs_dim) = mb_obs;
      actor_in.middleRows(nc.obs_dim, action_dim) = mb_aprev;
      if (nc.distillation) {
        z = nets.phi.forward(mb_priv);
        z_tilde = nets.sigma.forward(mb_hist);
        actor_in.bottomRows(nc.latent_dim) = z;
      }
      const MatrixXd mean = nets.actor_mean.forward(actor_in);

      MatrixXd critic_in(nc.critic_input_dim(), b);
      critic_in.topRows(nc.obs_dim) = mb_obs;
      critic_in.middleRows(nc.obs_dim, nc.priv_dim) = mb_priv;
      critic_in.bottomRows(action_dim) = mb_aprev;
      const MatrixXd values = nets.critic.forward(critic_in);

      const VectorXd ls = nets.log_std_clamped();
      const VectorXd inv_var = (-2.0 * ls).array().exp();

      // Policy surrogate.
      MatrixXd d_mean = MatrixXd::Zero(action_dim, b);
      VectorXd d_logstd = VectorXd::Zero(action_dim);
      double policy_loss = 0.0, kl_acc = 0.0, clip_count = 0.0;
      const double inv_b = 1.0 / static_cast<double>(b);
      for (int k = 0; k < b; ++k) {
        double logp = -0.5 * action_dim * std::log(2.0 * M_PI) - ls.sum();
        for (int i = 0; i < action_dim; ++i) {
          const double d = mb_action(i, k) - mean(i, k);
          logp += -0.5 * d * d * inv_var(i);
        }
        const double ratio = std::exp(logp - mb_logp_old(k));
        const double adv = mb_adv(k);
        const double unclipped = ratio * adv;
        const double clipped =
            std::clamp(ratio, 1.0 - config.clip_ratio, 1.0 + config.clip_ratio) * adv;
        policy_loss += -std::min(unclipped, clipped) * inv_b;
        kl_acc += (mb_logp_old(k) - logp) * inv_b;
        if (std::abs(ratio - 1.0) > config.clip_ratio) clip_count += inv_b;

        const bool pass_through = unclipped <= clipped;  // min picks the live branch
        if (pass_through) {
          const double dL_dlogp = -inv_b * ratio * adv;
          for (int i = 0; i < action_dim; ++i) {
            const double d = mb_action(i, k) - mean(i, k);
            d_mean(i, k) += dL_dlogp * d * inv_var(i);
            d_logstd(i) += dL_dlogp * (d * d * inv_var(i) - 1.0);
          }
        }
      }

      // Value loss.
      double value_loss = 0.0;
      MatrixXd d_values(1, b);
      for (int k = 0; k < b; ++k) {
        const double err = values(0, k) - mb_ret(k);
        value_loss += 0.5 * err * err * inv_b;
        d_values(0, k) = config.value_coef * err * inv_b;
      }

      // Entropy bonus (state-independent for a diagonal Gaussian).
      const double entropy =
          ls.sum() + 0.5 * action_dim * std::log(2.0 * M_PI * std::exp(1.0));
      d_logstd.array() -= config.entropy_coef;

      // Distillation loss; sigma learns from the regularization half only.
      double distill_acc = 0.0;
      MatrixXd dz = MatrixXd::Zero(nc.latent_dim, std::max(b, 1));
      MatrixXd dz_tilde = MatrixXd::Zero(nc.latent_dim, std::max(b, 1));
      if (nc.distillation) {
        for (int k = 0; k < b; ++k) {
          DistillResult d = distill_loss(z.col(k), z_tilde.col(k), lambda);
          distill_acc += d.value * inv_b;
          dz.col(k) = d.dz * inv_b;
          dz_tilde.col(k) = d.dz_tilde * inv_b;
        }
      }

      const double total_loss = policy_loss + config.value_coef * value_loss -
                                config.entropy_coef * entropy + distill_acc;
      if (!std::isfinite(total_loss)) {
        throw std::runtime_error("ppo_update: non-finite training signal");
      }

      // Backward.
      nets.critic.backward(d_values);
      const MatrixXd d_actor_in = nets.actor_mean.backward(d_mean);
      if (nc.distillation) {
        const MatrixXd dz_total = d_actor_in.bottomRows(nc.latent_dim) + dz;
        nets.phi.backward(dz_total);
        nets.sigma.backward(dz_tilde);
      }

      // log_std gradient passes the clamp only strictly inside the bounds.
      for (int i = 0; i < action_dim; ++i) {
        const double p = nets.log_std.value(i, 0);
        nets.log_std.grad(i, 0) +=
            (p > nc.log_std_min && p < nc.log_std_max) ? d_logstd(i) : 0.0;
      }

      double gnorm = global_grad_norm(params);
      if (!std::isfinite(gnorm)) throw std::runtime_error("ppo_update: non-finite gradient");
      if (config.max_grad_norm > 0.0 && gnorm > config.max_grad_norm) {
        const double scale = config.max_grad_norm / gnorm;
        for (Tensor* p : params) p->grad *= scale;
      }
      adam_step(params, learning_rate, ++adam_step_count);

      stats.policy_loss += policy_loss;
      stats.value_loss += value_loss;
      stats.entropy += entropy;
      stats.distill += distill_acc;
      stats.approx_kl += kl_acc;
      stats.clip_fraction += clip_count;
      stats.grad_norm += gnorm;
      passes += 1;
    }
  }

  if (passes > 0) {
    stats.policy_loss /= passes;
    stats.value_loss /= passes;
    stats.entropy /= passes;
    stats.distill /= passes;
    stats.approx_kl /= passes;
    stats.clip_fraction /= passes;
    stats.grad_norm /= passes;
  }

  const double ret_mean = gae.returns.mean();
  const double ret_var = (gae.returns.array() - ret_mean).square().mean();
  const double resid_var = (gae.returns - buffer.value).array().square().mean();
  stats.explained_variance = ret_var > 1e-12 ? 1.0 - resid_var / ret_var : 0.0;
  return stats;
}

}  // namespace artimanip
