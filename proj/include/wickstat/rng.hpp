#pragma once

#include <array>
#include <cstdint>

namespace wickstat {

using Philox4x32 = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// Philox4x32-10 block function.
Philox4x32 philox4x32(Philox4x32 ctr, PhiloxKey key);

enum class Purpose : std::uint32_t {
  Initial = 1,   // stationary draw at the start of a path
  Increment = 2, // OU increments along a path
  Test = 3,
  Bootstrap = 4,
  Synthetic = 5,
  Path = 6,      // block 0: stationary draw, block j + 1: step j
  ZLaw = 7,      // independent Z copies for law comparisons
};

// Counter-based stream. A draw is addressed by (block, element); the key is
// the master seed and the remaining counter words carry the stream index.
class RngStream {
public:
  RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}
  RngStream(std::uint64_t seed, std::uint64_t replica, Purpose purpose)
      : RngStream(seed, (replica << 8) | static_cast<std::uint64_t>(purpose)) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint32_t block() const { return block_; }
  void set_block(std::uint32_t b) { block_ = b; }
  void advance() { ++block_; }

  Philox4x32 raw(std::uint32_t element) const;
  // Two independent uniforms in (0, 1) with 53 random bits each.
  std::array<double, 2> uniform_pair(std::uint32_t element) const;
  // Two independent standard normals (Box-Muller).
  std::array<double, 2> gaussian_pair(std::uint32_t element) const;

private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint32_t block_ = 0;
};

}  // namespace wickstat
