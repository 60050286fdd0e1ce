#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace citenet {

/// Fenwick tree over nonnegative weights supporting weighted index lookup.
class Fenwick {
 public:
  Fenwick() = default;
  explicit Fenwick(std::size_t n) : tree_(n + 1, 0.0) {}

  std::size_t size() const { return tree_.size() - 1; }

  void add(std::size_t i, double delta) {
    for (++i; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
  }
  /// Sum of weights [0, end).
  double prefix(std::size_t end) const {
    double s = 0.0;
    for (; end > 0; end -= end & (~end + 1)) s += tree_[end];
    return s;
  }
  /// Smallest index whose inclusive prefix sum exceeds `target`.
  std::size_t find(double target) const {
    std::size_t pos = 0;
    std::size_t step = 1;
    while (step * 2 < tree_.size()) step *= 2;
    for (; step > 0; step /= 2)
      if (pos + step < tree_.size() && tree_[pos + step] <= target) {
        pos += step;
        target -= tree_[pos];
      }
    return std::min(pos, size() - 1);
  }

 private:
  std::vector<double> tree_{0.0};
};

}  // namespace citenet
