#include "pswarm/rng.hpp"

#include <cmath>
#include <numbers>

namespace pswarm {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

// MurmurHash3 finalizer.
inline std::uint64_t fmix64(std::uint64_t h) noexcept {
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return h;
}

constexpr std::uint64_t kRootPath = 0x243F6A8885A308D3ULL;

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

RngStream::RngStream(std::uint64_t seed) noexcept : RngStream(seed, fmix64(kRootPath), 0) {}

RngStream::RngStream(std::uint64_t seed, std::uint64_t path, std::uint32_t depth) noexcept
    : seed_(seed), path_(path), depth_(depth) {}

RngStream RngStream::split(std::uint64_t index) const noexcept {
  // Position-dependent mixing so that paths (a, b) and (b, a) differ.
  const std::uint64_t mixed_index = fmix64(index + 0x9E3779B97F4A7C15ULL * (depth_ + 1));
  const std::uint64_t child = fmix64((path_ << 23 | path_ >> 41) ^ mixed_index) + 0x632BE59BD9B4E019ULL;
  return RngStream(seed_, fmix64(child), depth_ + 1);
}

void RngStream::refill() noexcept {
  const std::array<std::uint32_t, 4> ctr{
      static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
      static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
  const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(path_),
                                         static_cast<std::uint32_t>(path_ >> 32)};
  const auto out = philox4x32(ctr, key);
  buffer_[0] = static_cast<std::uint64_t>(out[1]) << 32 | out[0];
  buffer_[1] = static_cast<std::uint64_t>(out[3]) << 32 | out[2];
  buffered_ = 2;
  ++block_;
}

std::uint64_t RngStream::next_u64() noexcept {
  if (buffered_ == 0) refill();
  return buffer_[2 - buffered_--];
}

double RngStream::uniform() noexcept {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() noexcept {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  // Box-Muller; both variates are used.
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  has_spare_normal_ = true;
  return radius * std::cos(angle);
}

}  // namespace pswarm
