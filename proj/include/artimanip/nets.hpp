#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "artimanip/rng.hpp"
#include "artimanip/spaces.hpp"

namespace artimanip {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Named parameter with gradient and Adam state. Biases are stored as
/// single-column matrices so everything serializes the same way.
struct Tensor {
  std::string name;
  MatrixXd value;
  MatrixXd grad;
  MatrixXd adam_m;
  MatrixXd adam_v;

  Tensor() = default;
  Tensor(std::string n, int rows, int cols)
      : name(std::move(n)),
        value(MatrixXd::Zero(rows, cols)),
        grad(MatrixXd::Zero(rows, cols)),
        adam_m(MatrixXd::Zero(rows, cols)),
        adam_v(MatrixXd::Zero(rows, cols)) {}

  void zero_grad() { grad.setZero(); }
};

/// Fills `t.value` with a (scaled) orthogonal matrix; rows x cols arbitrary.
void orthogonal_init(Tensor& t, Rng& rng, double gain);

/// Fully connected layer; batches are column-major (one sample per column).
class Linear {
 public:
  Linear(const std::string& name, int in_dim, int out_dim);

  MatrixXd forward(const MatrixXd& x);            // caches x for backward
  MatrixXd backward(const MatrixXd& dy);          // accumulates grads
  MatrixXd apply(const MatrixXd& x) const;        // inference, no cache

  int in_dim() const { return static_cast<int>(weight.value.cols()); }
  int out_dim() const { return static_cast<int>(weight.value.rows()); }

  Tensor weight;  // out x in
  Tensor bias;    // out x 1

 private:
  MatrixXd x_cache_;
};

/// Temporal convolution over a time-major stacked sequence: input rows are
/// [t0 channels..., t1 channels..., ...], one sample per column. Kernel 1
/// turns this into a shared per-step embedding.
class Conv1d {
 public:
  Conv1d(const std::string& name, int c_in, int c_out, int kernel, int stride, int l_in);

  int l_out() const { return (l_in_ - kernel_) / stride_ + 1; }
  int out_rows() const { return l_out() * c_out_; }

  MatrixXd forward(const MatrixXd& x);
  MatrixXd backward(const MatrixXd& dy);
  MatrixXd apply(const MatrixXd& x) const;

  Tensor weight;  // c_out x (c_in*kernel)
  Tensor bias;    // c_out x 1

 private:
  int c_in_, c_out_, kernel_, stride_, l_in_;
  MatrixXd x_cache_;
};

/// MLP with tanh hidden activations and a linear output layer.
class MLP {
 public:
  MLP(const std::string& name, const std::vector<int>& dims);

  MatrixXd forward(const MatrixXd& x);
  MatrixXd backward(const MatrixXd& dy);
  MatrixXd apply(const MatrixXd& x) const;

  void init(Rng& rng, double hidden_gain, double output_gain);
  std::vector<Tensor*> parameters();

  int in_dim() const { return layers_.front().in_dim(); }
  int out_dim() const { return layers_.back().out_dim(); }

 private:
  std::vector<Linear> layers_;
  std::vector<MatrixXd> act_cache_;  // tanh outputs per hidden layer
};

/// Temporal encoder: per-step embedding followed by strided temporal
/// convolutions over the history window, flattened into a linear head.
class AdaptationModule {
 public:
  AdaptationModule(int entry_dim, int history_len, int embed_dim, int conv_channels,
                   int latent_dim);

  MatrixXd forward(const MatrixXd& history);   // (history_len*entry_dim) x B
  MatrixXd backward(const MatrixXd& dz);
  MatrixXd apply(const MatrixXd& history) const;

  void init(Rng& rng);
  std::vector<Tensor*> parameters();

  int in_dim() const { return in_dim_; }
  int out_dim() const;

 private:
  int in_dim_;
  Conv1d embed_;
  Conv1d conv1_;
  Conv1d conv2_;
  Conv1d conv3_;
  Linear head_;
  MatrixXd e_, c1_, c2_, c3_;  // tanh caches
};

/// Dimension plan for the whole network set. Defaults follow the published
/// layout: z of 20 from an 8-dim privileged observation, H = 10 history.
struct NetworkConfig {
  int obs_dim = kObservationDim;
  int priv_dim = kPrivilegedDim;
  int action_dim = kActionDim;
  int partial_action_dim = kPartialActionDim;
  int history_len = kHistoryLength;
  int latent_dim = kLatentDim;
  std::vector<int> phi_hidden = {64, 64};
  int embed_dim = 32;
  int conv_channels = 32;
  std::vector<int> actor_hidden = {64, 64};
  std::vector<int> critic_hidden = {64, 64};
  double log_std_init = 0.0;
  double log_std_min = -4.0;
  double log_std_max = 1.0;
  bool distillation = true;  // false: actor consumes (obs, a_prev) only
  std::uint64_t init_seed = 0;

  int history_entry_dim() const { return obs_dim + partial_action_dim; }
  int actor_input_dim() const {
    return obs_dim + action_dim + (distillation ? latent_dim : 0);
  }
  int critic_input_dim() const { return obs_dim + priv_dim + action_dim; }
};

enum class ZSource { privileged, adapted };

struct ActResult {
  VectorXd action;   // raw Gaussian sample (or mean when deterministic)
  double log_prob = 0.0;
  double value = 0.0;
  VectorXd mean;
};

/// Actor-critic pair plus the privileged encoder phi and adaptation module
/// sigma. The actor is a diagonal Gaussian with a learned state-independent
/// log standard deviation, clamped to [log_std_min, log_std_max].
class NetworkSet {
 public:
  explicit NetworkSet(const NetworkConfig& config);

  /// Deterministic forward passes of the two encoders.
  VectorXd encode_priv(const VectorXd& priv) const;
  VectorXd adapt(const VectorXd& history_flat) const;

  ActResult act(const VectorXd& obs, const VectorXd& priv, const VectorXd& a_prev,
                const VectorXd& history_flat, ZSource z_source, bool deterministic,
                Rng* rng) const;

  double value(const VectorXd& obs, const VectorXd& priv, const VectorXd& a_prev) const;

  VectorXd log_std_clamped() const;
  VectorXd build_actor_input(const VectorXd& obs, const VectorXd& a_prev,
                             const VectorXd& z) const;

  std::vector<Tensor*> parameters();
  const NetworkConfig& config() const { return config_; }

  MLP phi;                 // priv -> z
  AdaptationModule sigma;  // history -> z~
  MLP actor_mean;
  Tensor log_std;          // action_dim x 1
  MLP critic;

 private:
  NetworkConfig config_;
};

/// Gaussian log density of `action` under (mean, exp(log_std)), summed over
/// dimensions.
double gaussian_log_prob(const VectorXd& action, const VectorXd& mean, const VectorXd& log_std);

}  // namespace artimanip
