#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace pswarm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every particle in a cloud received zero weight. `time` is the 1-based step,
// `filter` the swarm slot when raised from inside a swarm.
class AllWeightsZero : public Error {
 public:
  explicit AllWeightsZero(std::size_t time, std::optional<std::size_t> filter = std::nullopt);

  std::size_t time() const noexcept { return time_; }
  std::optional<std::size_t> filter() const noexcept { return filter_; }

  AllWeightsZero with_filter(std::size_t filter) const { return AllWeightsZero(time_, filter); }

 private:
  std::size_t time_;
  std::optional<std::size_t> filter_;
};

// A model kernel misbehaved: a sampler threw, or a weight was NaN / +inf.
class ModelEvaluationError : public Error {
 public:
  using Error::Error;
};

class FunctionalOverflow : public Error {
 public:
  using Error::Error;
};

class NegativeVarianceEstimate : public Error {
 public:
  NegativeVarianceEstimate(double first_moment, double second_moment);
};

}  // namespace pswarm
