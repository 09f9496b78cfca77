#pragma once

#include <Eigen/Dense>

#include "artimanip/spaces.hpp"

namespace artimanip {

/// Ring of the last H = 10 (observation, partial previous action) pairs,
/// oldest first, zero-filled at episode start.
class HistoryBuffer {
 public:
  HistoryBuffer() { clear(); }

  void clear() { data_.setZero(kHistoryLength * kHistoryEntryDim); }

  /// Pushes the newest entry; the oldest drops out.
  void push(const Eigen::Ref<const Eigen::VectorXd>& observation,
            const Eigen::Ref<const Eigen::VectorXd>& partial_action) {
    if (observation.size() != kObservationDim || partial_action.size() != kPartialActionDim) {
      throw std::invalid_argument("history entry dimension mismatch");
    }
    data_.head((kHistoryLength - 1) * kHistoryEntryDim) =
        data_.tail((kHistoryLength - 1) * kHistoryEntryDim).eval();
    auto entry = data_.tail(kHistoryEntryDim);
    entry.head(kObservationDim) = observation;
    entry.tail(kPartialActionDim) = partial_action;
  }

  /// Time-major layout: entry t occupies rows [t*35, (t+1)*35).
  const Eigen::VectorXd& flatten() const { return data_; }

 private:
  Eigen::VectorXd data_;
};

}  // namespace artimanip
