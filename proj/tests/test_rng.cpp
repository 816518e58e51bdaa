#include <doctest.h>

#include <cmath>

#include "wickstat/rng.hpp"

using namespace wickstat;

TEST_CASE("Philox4x32-10 known answers") {
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == Philox4x32{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        Philox4x32{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        Philox4x32{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are addressable and distinct") {
  RngStream a(42, 3, Purpose::Path), b(42, 3, Purpose::Path), c(42, 4, Purpose::Path), e(42, 3, Purpose::ZLaw);
  CHECK(a.raw(5) == b.raw(5));
  CHECK(a.raw(5) != c.raw(5));
  CHECK(a.raw(5) != e.raw(5));
  CHECK(a.raw(5) != a.raw(6));
  const auto before = a.raw(0);
  a.advance();
  CHECK(a.block() == 1);
  CHECK(a.raw(0) != before);
  a.set_block(0);
  CHECK(a.raw(0) == before);
  CHECK(RngStream(1, 0).raw(0) != RngStream(2, 0).raw(0));
}

TEST_CASE("uniforms and Gaussians have the right moments") {
  RngStream r(7, 0, Purpose::Test);
  const int n = 200000;
  double su = 0.0, sg = 0.0, sg2 = 0.0, sg4 = 0.0, cross = 0.0;
  double umin = 1.0, umax = 0.0;
  for (int i = 0; i < n / 2; ++i) {
    const auto u = r.uniform_pair(static_cast<std::uint32_t>(i));
    for (double v : u) {
      su += v;
      umin = std::min(umin, v);
      umax = std::max(umax, v);
    }
    const auto g = r.gaussian_pair(static_cast<std::uint32_t>(i));
    for (double v : g) {
      sg += v;
      sg2 += v * v;
      sg4 += v * v * v * v;
    }
    cross += g[0] * g[1];
  }
  CHECK(umin > 0.0);
  CHECK(umax < 1.0);
  CHECK(std::abs(su / n - 0.5) < 4 * std::sqrt(1.0 / 12 / n));
  CHECK(std::abs(sg / n) < 4 / std::sqrt(double(n)));
  CHECK(std::abs(sg2 / n - 1.0) < 4 * std::sqrt(2.0 / n));
  CHECK(std::abs(sg4 / n - 3.0) < 4 * std::sqrt(96.0 / n));
  CHECK(std::abs(cross / (n / 2)) < 4 / std::sqrt(n / 2.0));
}
