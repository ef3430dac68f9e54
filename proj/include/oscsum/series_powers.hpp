#pragma once

// Memoized powers of an order-indexed series with vanishing zeroth order:
// power(p, m) = [y^p]^(m) where y^(0) = 0, so power(p, m) = 0 for p > m.
// Shared by the order-by-order recursions and their residual re-checks.

#include <map>
#include <utility>
#include <vector>

#include "oscsum/fourier.hpp"

namespace oscsum {

class OrderPowers {
 public:
  OrderPowers(int dim, int max_power) : dim_(dim), P_(max_power), zero_(dim) {
    y_.emplace_back(dim);  // y^(0) = 0
  }

  void push_order(const TrigSeries& yk) { y_.push_back(yk); }
  int top_order() const { return static_cast<int>(y_.size()) - 1; }

  const TrigSeries& power(int p, int m) {
    if (p < 1 || p > P_ || m < p) return zero_;
    if (p == 1) return y_[m];
    auto key = std::make_pair(p, m);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    TrigSeries acc(dim_);
    for (int j = 1; j <= m - (p - 1); ++j) {
      const TrigSeries& rest = power(p - 1, m - j);
      if (rest.empty() || y_[j].empty()) continue;
      acc = acc + convolve(y_[j], rest);
    }
    return memo_.emplace(key, std::move(acc)).first->second;
  }

 private:
  int dim_, P_;
  std::vector<TrigSeries> y_;
  std::map<std::pair<int, int>, TrigSeries> memo_;
  TrigSeries zero_;
};

}  // namespace oscsum
