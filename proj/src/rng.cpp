#include "wickstat/rng.hpp"

#include <cmath>

namespace wickstat {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace

Philox4x32 philox4x32(Philox4x32 c, PhiloxKey k) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c[0], hi0, lo0);
    mulhilo(kM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kW0;
    k[1] += kW1;
  }
  return c;
}

Philox4x32 RngStream::raw(std::uint32_t element) const {
  Philox4x32 ctr{element, block_, static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
  PhiloxKey key{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
  return philox4x32(ctr, key);
}

std::array<double, 2> RngStream::uniform_pair(std::uint32_t element) const {
  const auto r = raw(element);
  return {to_unit(r[0], r[1]), to_unit(r[2], r[3])};
}

std::array<double, 2> RngStream::gaussian_pair(std::uint32_t element) const {
  const auto u = uniform_pair(element);
  const double rad = std::sqrt(-2.0 * std::log(u[0]));
  const double th = 6.283185307179586476925 * u[1];
  return {rad * std::cos(th), rad * std::sin(th)};
}

}  // namespace wickstat
