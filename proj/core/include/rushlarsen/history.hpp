#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "rushlarsen/errors.hpp"

namespace rushlarsen {

/// One accepted node: the state and the split evaluated there, a_j = a(t_j, y_j), b_j = b(t_j, y_j).
template <class Scalar>
struct StepRecord {
  double t = 0.0;
  std::vector<Scalar> y;
  std::vector<Scalar> a;
  std::vector<Scalar> b;
};

/// Ring of the most recent `capacity` records, uniformly spaced in time.
template <class Scalar>
class History {
 public:
  explicit History(std::size_t capacity) : ring_(capacity) {
    if (capacity == 0) throw HistoryError("History: capacity must be positive");
  }

  void push(double t, std::vector<Scalar> y, std::vector<Scalar> a, std::vector<Scalar> b) {
    if (size_ > 0) {
      const double last = back().t;
      if (!(t > last)) throw HistoryError("History: times must be strictly increasing");
      if (size_ > 1) {
        const double step = last - back(1).t;
        if (std::abs((t - last) - step) > 1e-12 * std::max(std::abs(step), std::abs(t))) {
          throw HistoryError("History: non-uniform spacing");
        }
      }
    }
    head_ = (head_ + 1) % ring_.size();
    ring_[head_] = StepRecord<Scalar>{t, std::move(y), std::move(a), std::move(b)};
    if (size_ < ring_.size()) ++size_;
  }

  std::size_t size() const noexcept { return size_; }
  std::size_t capacity() const noexcept { return ring_.size(); }
  bool full() const noexcept { return size_ == ring_.size(); }

  /// Record n - lag, where n is the newest.
  const StepRecord<Scalar>& back(std::size_t lag = 0) const {
    if (lag >= size_) {
      throw HistoryError("History: lag " + std::to_string(lag) + " with only " +
                         std::to_string(size_) + " records");
    }
    return ring_[(head_ + ring_.size() - lag) % ring_.size()];
  }

  /// Uniform step between records, 0 when fewer than two are stored.
  double spacing() const { return size_ < 2 ? 0.0 : back().t - back(1).t; }

 private:
  std::vector<StepRecord<Scalar>> ring_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
};

}  // namespace rushlarsen
