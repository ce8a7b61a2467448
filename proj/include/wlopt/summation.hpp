#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace wlopt {

// Neumaier compensated accumulator. Reductions over Monte Carlo replicates
// always run in replicate-index order through one of these, which keeps the
// totals independent of the thread count.
class CompensatedSum {
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

  double total() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_total(std::span<const double> values) {
  CompensatedSum s;
  for (double v : values) s.add(v);
  return s.total();
}

}  // namespace wlopt
