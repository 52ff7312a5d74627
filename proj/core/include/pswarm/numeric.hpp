#pragma once

#include <span>

namespace pswarm {

/// log(sum_i exp(values[i])). Returns -inf for an empty span or when every
/// entry is -inf.
double log_sum_exp(std::span<const double> values) noexcept;

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double value) noexcept;
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace pswarm
