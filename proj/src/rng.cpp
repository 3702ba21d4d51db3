#include "gendir/rng.hpp"

#include <cmath>
#include <numbers>

namespace gendir {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

// Uniform in the open interval (0, 1) from 64 random bits.
inline double open_uniform(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

void standard_normals(std::uint64_t seed, StreamId id, std::span<double> out) noexcept {
  const PhiloxKey key = key_from_seed(seed);
  for (std::size_t m = 0; m < out.size(); m += 2) {
    const auto block = static_cast<std::uint32_t>(m / 2);
    const auto bits = philox4x32({block, id.substream, id.particle, id.step}, key);
    const double u1 = open_uniform(bits[0], bits[1]);
    const double u2 = open_uniform(bits[2], bits[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    out[m] = radius * std::cos(angle);
    if (m + 1 < out.size()) out[m + 1] = radius * std::sin(angle);
  }
}

}  // namespace gendir
