#pragma once

#include <cmath>
#include <cstddef>
#include <limits>

namespace primebounds {

// Neumaier's variant of Kahan summation with a running a-priori error bound.
//
// The bound follows the classical analysis of compensated summation:
//   |computed - exact| <= 2u|S| + 2n u^2 sum|x_i|
// where u is the unit roundoff. Callers that feed already-rounded terms add
// their own per-term error separately.
class CompensatedSum {
 public:
  void add(double value) {
    const double t = sum_ + value;
    if (std::fabs(sum_) >= std::fabs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
    abs_total_ += std::fabs(value);
    ++count_;
  }

  CompensatedSum& operator+=(double value) {
    add(value);
    return *this;
  }

  double value() const { return sum_ + compensation_; }
  std::size_t count() const { return count_; }
  double abs_total() const { return abs_total_; }

  double error_bound() const {
    constexpr double u = std::numeric_limits<double>::epsilon() / 2;
    const double n = static_cast<double>(count_);
    return 2 * u * std::fabs(value()) + 2 * n * u * u * abs_total_;
  }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
  double abs_total_ = 0.0;
  std::size_t count_ = 0;
};

}  // namespace primebounds
