#pragma once

// Counter-based random numbers (Philox4x32-10, Salmon et al. 2011).
//
// Every Wiener increment is a pure function of
//   (seed, particle, step, substream, component)
// so results do not depend on how particles are spread across threads or on
// the order in which they are visited.

#include <array>
#include <cstdint>
#include <limits>
#include <span>

namespace gendir {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Ten rounds of Philox4x32 applied to one counter block.
PhiloxCounter philox4x32(PhiloxCounter counter, PhiloxKey key) noexcept;

inline PhiloxKey key_from_seed(std::uint64_t seed) noexcept {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

/// Identifies one independent stream of variates.
struct StreamId {
  std::uint32_t particle = 0;
  std::uint32_t step = 0;
  /// 0 is the primary increment; 1..n are boundary retries.
  std::uint32_t substream = 0;
};

/// Substream reserved for drawing initial conditions.
inline constexpr std::uint32_t kInitSubstream = std::numeric_limits<std::uint32_t>::max();

/// Fills out with independent standard normal variates (Box-Muller on
/// 53-bit uniforms). Component m always comes from counter block m / 2.
void standard_normals(std::uint64_t seed, StreamId id, std::span<double> out) noexcept;

/// UniformRandomBitGenerator over one stream, for use with <random>
/// distributions. Successive calls walk the counter block index.
class PhiloxEngine {
 public:
  using result_type = std::uint32_t;

  PhiloxEngine(std::uint64_t seed, StreamId id) noexcept : key_(key_from_seed(seed)), id_(id) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    if (pos_ == 4) {
      buffer_ = philox4x32({block_++, id_.substream, id_.particle, id_.step}, key_);
      pos_ = 0;
    }
    return buffer_[pos_++];
  }

 private:
  PhiloxKey key_;
  StreamId id_;
  std::uint32_t block_ = 0;
  PhiloxCounter buffer_{};
  int pos_ = 4;
};

}  // namespace gendir
