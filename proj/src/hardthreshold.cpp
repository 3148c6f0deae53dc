#include "siht/hardthreshold.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace siht {

SupportSet top_support(const DenseVector& x, int s, TieRule rule) {
  const int n = static_cast<int>(x.size());
  if (s <= 0 || s >= n) throw std::invalid_argument("top_support: require 1 <= s < n");
  require_finite(x, "top_support");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (rule == TieRule::lowest_index) {
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double ma = std::abs(x[a]), mb = std::abs(x[b]);
      return ma != mb ? ma > mb : a < b;
    });
  } else {
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double ma = std::abs(x[a]), mb = std::abs(x[b]);
      return ma != mb ? ma > mb : a > b;
    });
  }
  order.resize(s);
  return SupportSet(std::move(order), n);
}

SparseIterate hard_threshold(const DenseVector& x, int s, TieRule rule) {
  return SparseIterate(x, top_support(x, s, rule));
}

}  // namespace siht
