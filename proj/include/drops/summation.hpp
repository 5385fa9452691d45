#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace drops {

// Kahan-Neumaier compensated accumulator. Deterministic for a fixed
// insertion order, accurate to a few ulps for 1e8-term sums.
class KahanAccumulator {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Pairwise reduction with a fixed tree, independent of chunking.
inline double pairwise_sum(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    KahanAccumulator acc;
    for (double x : v) acc.add(x);
    return acc.value();
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(std::span<const double>(v));
}

}  // namespace drops
