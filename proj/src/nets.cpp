#include "artimanip/nets.hpp"

#include <cmath>
#include <stdexcept>

namespace artimanip {

void orthogonal_init(Tensor& t, Rng& rng, double gain) {
  const int rows = static_cast<int>(t.value.rows());
  const int cols = static_cast<int>(t.value.cols());
  const int big = std::max(rows, cols);
  const int small = std::min(rows, cols);
  MatrixXd a(big, small);
  for (int i = 0; i < big; ++i)
    for (int j = 0; j < small; ++j) a(i, j) = rng.normal();
  Eigen::HouseholderQR<MatrixXd> qr(a);
  MatrixXd q = qr.householderQ() * MatrixXd::Identity(big, small);
  const MatrixXd r = qr.matrixQR().topRows(small).triangularView<Eigen::Upper>();
  for (int j = 0; j < small; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  t.value = gain * (rows >= cols ? q : MatrixXd(q.transpose()));
}

Linear::Linear(const std::string& name, int in_dim, int out_dim)
    : weight(name + ".weight", out_dim, in_dim), bias(name + ".bias", out_dim, 1) {}

MatrixXd Linear::forward(const MatrixXd& x) {
  x_cache_ = x;
  return (weight.value * x).colwise() + bias.value.col(0);
}

MatrixXd Linear::backward(const MatrixXd& dy) {
  weight.grad += dy * x_cache_.transpose();
  bias.grad.col(0) += dy.rowwise().sum();
  return weight.value.transpose() * dy;
}

MatrixXd Linear::apply(const MatrixXd& x) const {
  return (weight.value * x).colwise() + bias.value.col(0);
}

Conv1d::Conv1d(const std::string& name, int c_in, int c_out, int kernel, int stride, int l_in)
    : weight(name + ".weight", c_out, c_in * kernel),
      bias(name + ".bias", c_out, 1),
      c_in_(c_in),
      c_out_(c_out),
      kernel_(kernel),
      stride_(stride),
      l_in_(l_in) {
  if (l_out() < 1) throw std::invalid_argument("conv1d: empty output");
}

MatrixXd Conv1d::forward(const MatrixXd& x) {
  x_cache_ = x;
  return apply(x);
}

MatrixXd Conv1d::apply(const MatrixXd& x) const {
  const int b = static_cast<int>(x.cols());
  MatrixXd y(out_rows(), b);
  for (int t = 0; t < l_out(); ++t) {
    y.middleRows(t * c_out_, c_out_) =
        (weight.value * x.middleRows(t * stride_ * c_in_, c_in_ * kernel_)).colwise() +
        bias.value.col(0);
  }
  return y;
}

MatrixXd Conv1d::backward(const MatrixXd& dy) {
  MatrixXd dx = MatrixXd::Zero(x_cache_.rows(), x_cache_.cols());
  for (int t = 0; t < l_out(); ++t) {
    const auto dy_t = dy.middleRows(t * c_out_, c_out_);
    const auto x_win = x_cache_.middleRows(t * stride_ * c_in_, c_in_ * kernel_);
    weight.grad += dy_t * x_win.transpose();
    bias.grad.col(0) += dy_t.rowwise().sum();
    dx.middleRows(t * stride_ * c_in_, c_in_ * kernel_) += weight.value.transpose() * dy_t;
  }
  return dx;
}

MLP::MLP(const std::string& name, const std::vector<int>& dims) {
  if (dims.size() < 2) throw std::invalid_argument("MLP needs at least in/out dims");
  for (size_t i = 0; i + 1 < dims.size(); ++i) {
    layers_.emplace_back(name + ".l" + std::to_string(i), dims[i], dims[i + 1]);
  }
}

MatrixXd MLP::forward(const MatrixXd& x) {
  act_cache_.clear();
  MatrixXd h = x;
  for (size_t i = 0; i < layers_.size(); ++i) {
    h = layers_[i].forward(h);
    if (i + 1 < layers_.size()) {
      h = h.array().tanh();
      act_cache_.push_back(h);
    }
  }
  return h;
}

MatrixXd MLP::backward(const MatrixXd& dy) {
  MatrixXd d = dy;
  for (int i = static_cast<int>(layers_.size()) - 1; i >= 0; --i) {
    d = layers_[i].backward(d);
    if (i > 0) {
      const MatrixXd& a = act_cache_[i - 1];
      d = d.cwiseProduct((1.0 - a.array().square()).matrix());
    }
  }
  return d;
}

MatrixXd MLP::apply(const MatrixXd& x) const {
  MatrixXd h = x;
  for (size_t i = 0; i < layers_.size(); ++i) {
    h = layers_[i].apply(h);
    if (i + 1 < layers_.size()) h = h.array().tanh();
  }
  return h;
}

void MLP::init(Rng& rng, double hidden_gain, double output_gain) {
  for (size_t i = 0; i < layers_.size(); ++i) {
    const double gain = (i + 1 < layers_.size()) ? hidden_gain : output_gain;
    orthogonal_init(layers_[i].weight, rng, gain);
    layers_[i].bias.value.setZero();
  }
}

std::vector<Tensor*> MLP::parameters() {
  std::vector<Tensor*> out;
  for (Linear& l : layers_) {
    out.push_back(&l.weight);
    out.push_back(&l.bias);
  }
  return out;
}

AdaptationModule::AdaptationModule(int entry_dim, int history_len, int embed_dim,
                                   int conv_channels, int latent_dim)
    : in_dim_(entry_dim * history_len),
      embed_("sigma.embed", entry_dim, embed_dim, 1, 1, history_len),
      conv1_("sigma.conv1", embed_dim, conv_channels, 3, 1, history_len),
      conv2_("sigma.conv2", conv_channels, conv_channels, 3, 1, history_len - 2),
      conv3_("sigma.conv3", conv_channels, latent_dim, 3, 2, history_len - 4),
      head_("sigma.head", conv3_.out_rows(), latent_dim) {}

int AdaptationModule::out_dim() const { return head_.out_dim(); }

MatrixXd AdaptationModule::forward(const MatrixXd& history) {
  e_ = embed_.forward(history).array().tanh();
  c1_ = conv1_.forward(e_).array().tanh();
  c2_ = conv2_.forward(c1_).array().tanh();
  c3_ = conv3_.forward(c2_).array().tanh();
  return head_.forward(c3_);
}

MatrixXd AdaptationModule::backward(const MatrixXd& dz) {
  MatrixXd d = head_.backward(dz);
  d = d.cwiseProduct((1.0 - c3_.array().square()).matrix());
  d = conv3_.backward(d);
  d = d.cwiseProduct((1.0 - c2_.array().square()).matrix());
  d = conv2_.backward(d);
  d = d.cwiseProduct((1.0 - c1_.array().square()).matrix());
  d = conv1_.backward(d);
  d = d.cwiseProduct((1.0 - e_.array().square()).matrix());
  return embed_.backward(d);
}

MatrixXd AdaptationModule::apply(const MatrixXd& history) const {
  MatrixXd h = embed_.apply(history).array().tanh();
  h = conv1_.apply(h).array().tanh();
  h = conv2_.apply(h).array().tanh();
  h = conv3_.apply(h).array().tanh();
  return head_.apply(h);
}

void AdaptationModule::init(Rng& rng) {
  const double g = std::sqrt(2.0);
  orthogonal_init(embed_.weight, rng, g);
  orthogonal_init(conv1_.weight, rng, g);
  orthogonal_init(conv2_.weight, rng, g);
  orthogonal_init(conv3_.weight, rng, g);
  orthogonal_init(head_.weight, rng, 1.0);
  embed_.bias.value.setZero();
  conv1_.bias.value.setZero();
  conv2_.bias.value.setZero();
  conv3_.bias.value.setZero();
  head_.bias.value.setZero();
}

std::vector<Tensor*> AdaptationModule::parameters() {
  return {&embed_.weight, &embed_.bias, &conv1_.weight, &conv1_.bias, &conv2_.weight,
          &conv2_.bias,   &conv3_.weight, &conv3_.bias, &head_.weight, &head_.bias};
}

namespace {
std::vector<int> chain(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> dims{in};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(out);
  return dims;
}
}  // namespace

NetworkSet::NetworkSet(const NetworkConfig& config)
    : phi("phi", chain(config.priv_dim, config.phi_hidden, config.latent_dim)),
      sigma(config.history_entry_dim(), config.history_len, config.embed_dim,
            config.conv_channels, config.latent_dim),
      actor_mean("actor", chain(config.actor_input_dim(), config.actor_hidden, config.action_dim)),
      log_std("actor.log_std", config.action_dim, 1),
      critic("critic", chain(config.critic_input_dim(), config.critic_hidden, 1)),
      config_(config) {
  Rng rng(mix_seed(config.init_seed, 0xA11C0DEULL));
  const double g = std::sqrt(2.0);
  phi.init(rng, g, 1.0);
  sigma.init(rng);
  actor_mean.init(rng, g, 0.01);
  critic.init(rng, g, 1.0);
  log_std.value.setConstant(config.log_std_init);
}

VectorXd NetworkSet::encode_priv(const VectorXd& priv) const {
  if (priv.size() != config_.priv_dim) throw std::invalid_argument("privileged input dim mismatch");
  return phi.apply(priv);
}

VectorXd NetworkSet::adapt(const VectorXd& history_flat) const {
  if (history_flat.size() != sigma.in_dim())
    throw std::invalid_argument("history input dim mismatch");
  return sigma.apply(history_flat);
}

VectorXd NetworkSet::log_std_clamped() const {
  return log_std.value.col(0)
      .cwiseMax(config_.log_std_min)
      .cwiseMin(config_.log_std_max);
}

VectorXd NetworkSet::build_actor_input(const VectorXd& obs, const VectorXd& a_prev,
                                       const VectorXd& z) const {
  VectorXd in(config_.actor_input_dim());
  in.head(config_.obs_dim) = obs;
  in.segment(config_.obs_dim, config_.action_dim) = a_prev;
  if (config_.distillation) in.tail(config_.latent_dim) = z;
  return in;
}

ActResult NetworkSet::act(const VectorXd& obs, const VectorXd& priv, const VectorXd& a_prev,
                          const VectorXd& history_flat, ZSource z_source, bool deterministic,
                          Rng* rng) const {
  VectorXd z;
  if (config_.distillation) {
    z = (z_source == ZSource::privileged) ? encode_priv(priv) : adapt(history_flat);
  }
  const VectorXd mean = actor_mean.apply(build_actor_input(obs, a_prev, z));
  const VectorXd ls = log_std_clamped();

  ActResult out;
  out.mean = mean;
  if (deterministic) {
    out.action = mean;
  } else {
    if (rng == nullptr) throw std::invalid_argument("stochastic act needs an rng");
    out.action = mean;
    for (int i = 0; i < mean.size(); ++i) out.action(i) += std::exp(ls(i)) * rng->normal();
  }
  out.log_prob = gaussian_log_prob(out.action, mean, ls);
  out.value = value(obs, priv, a_prev);
  return out;
}

double NetworkSet::value(const VectorXd& obs, const VectorXd& priv, const VectorXd& a_prev) const {
  VectorXd in(config_.critic_input_dim());
  in.head(config_.obs_dim) = obs;
  in.segment(config_.obs_dim, config_.priv_dim) = priv;
  in.tail(config_.action_dim) = a_prev;
  return critic.apply(in)(0);
}

std::vector<Tensor*> NetworkSet::parameters() {
  std::vector<Tensor*> out;
  if (config_.distillation) {
    for (Tensor* t : phi.parameters()) out.push_back(t);
    for (Tensor* t : sigma.parameters()) out.push_back(t);
  }
  for (Tensor* t : actor_mean.parameters()) out.push_back(t);
  out.push_back(&log_std);
  for (Tensor* t : critic.parameters()) out.push_back(t);
  return out;
}

double gaussian_log_prob(const VectorXd& action, const VectorXd& mean, const VectorXd& log_std) {
  double lp = -0.5 * static_cast<double>(action.size()) * std::log(2.0 * M_PI);
  for (int i = 0; i < action.size(); ++i) {
    const double inv_std = std::exp(-log_std(i));
    const double zscore = (action(i) - mean(i)) * inv_std;
    lp += -0.5 * zscore * zscore - log_std(i);
  }
  return lp;
}

}  // namespace artimanip
