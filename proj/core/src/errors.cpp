#include "pswarm/errors.hpp"

namespace pswarm {
namespace {

std::string describe_zero_weights(std::size_t time, std::optional<std::size_t> filter) {
  std::string message = "all particle weights are zero at t=" + std::to_string(time);
  if (filter) message += " in filter " + std::to_string(*filter);
  return message;
}

}  // namespace

AllWeightsZero::AllWeightsZero(std::size_t time, std::optional<std::size_t> filter)
    : Error(describe_zero_weights(time, filter)), time_(time), filter_(filter) {}

NegativeVarianceEstimate::NegativeVarianceEstimate(double first_moment, double second_moment)
    : Error("negative variance estimate: second moment " + std::to_string(second_moment) +
            " < squared first moment " + std::to_string(first_moment * first_moment)) {}

}  // namespace pswarm
