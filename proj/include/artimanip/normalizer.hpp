#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace artimanip {

/// Running mean/variance (Welford) used to whiten network inputs. Updates
/// happen in a fixed order during collection; evaluation uses frozen stats.
class RunningNormalizer {
 public:
  RunningNormalizer() = default;
  explicit RunningNormalizer(int dim)
      : mean_(Eigen::VectorXd::Zero(dim)), m2_(Eigen::VectorXd::Zero(dim)) {}

  void update(const Eigen::Ref<const Eigen::VectorXd>& x) {
    count_ += 1.0;
    const Eigen::VectorXd delta = x - mean_;
    mean_ += delta / count_;
    m2_ += delta.cwiseProduct(x - mean_);
  }

  Eigen::VectorXd normalize(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    if (count_ < 2.0) return x;
    const Eigen::VectorXd stddev = (m2_ / count_).cwiseMax(1e-8).cwiseSqrt();
    return ((x - mean_).cwiseQuotient(stddev)).cwiseMax(-10.0).cwiseMin(10.0);
  }

  double count() const { return count_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::VectorXd& m2() const { return m2_; }
  void restore(double count, Eigen::VectorXd mean, Eigen::VectorXd m2) {
    count_ = count;
    mean_ = std::move(mean);
    m2_ = std::move(m2);
  }

 private:
  double count_ = 0.0;
  Eigen::VectorXd mean_;
  Eigen::VectorXd m2_;
};

}  // namespace artimanip
