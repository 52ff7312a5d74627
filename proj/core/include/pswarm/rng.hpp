#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace pswarm {

/// Philox4x32-10 block function (Salmon et al., SC'11). Pure: the output is a
/// function of (counter, key) only.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Counter-based random stream.
///
/// A stream is identified by a 64-bit seed and a path of 64-bit indices
/// (replicate, filter, time, particle, purpose, ...). The path is folded into
/// a 64-bit digest that becomes the Philox key; the seed and a block counter
/// form the Philox counter. Draws are therefore a pure function of
/// (seed, path, position), independent of thread scheduling.
///
/// Streams are plain values. Copying a stream copies its position, so two
/// copies produce the same sequence.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed) noexcept;

  /// Child stream whose path is this path extended by `index`. The child starts
  /// at position zero and does not depend on how far this stream has advanced.
  RngStream split(std::uint64_t index) const noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on the open interval (0, 1), 53 bits of resolution.
  double uniform() noexcept;
  double normal() noexcept;
  double normal(double mean, double sd) noexcept { return mean + sd * normal(); }

  // UniformRandomBitGenerator interface.
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept { return next_u64(); }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t path_digest() const noexcept { return path_; }
  std::uint32_t depth() const noexcept { return depth_; }

  friend bool operator==(const RngStream&, const RngStream&) = default;

 private:
  RngStream(std::uint64_t seed, std::uint64_t path, std::uint32_t depth) noexcept;
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t path_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  std::uint32_t depth_;
  std::uint8_t buffered_ = 0;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// Free-function spelling of RngStream::split.
inline RngStream split_stream(const RngStream& parent, std::uint64_t index) noexcept {
  return parent.split(index);
}

/// Well-known path components so independent consumers never collide.
namespace stream_purpose {
inline constexpr std::uint64_t kParameters = 0x70617261;  // "para"
inline constexpr std::uint64_t kFilters = 0x66696c74;     // "filt"
inline constexpr std::uint64_t kMutation = 0x6d757461;    // "muta"
inline constexpr std::uint64_t kResampling = 0x72657361;  // "resa"
inline constexpr std::uint64_t kSimulation = 0x73696d75;  // "simu"
inline constexpr std::uint64_t kProbes = 0x70726f62;      // "prob"
}  // namespace stream_purpose

}  // namespace pswarm
