#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fft.hpp"
#include "wickstat/renorm.hpp"

namespace wickstat {

namespace {

void check_hypotheses(double a, double b, int d) {
  if (!(a > -d && a < 0.0 && b > -d && b < 0.0 && a + b < -d))
    throw std::invalid_argument("exponents must satisfy -d < a, b < 0 and a + b < -d");
}

}  // namespace

double conv_bound_ratio(double a, double b, int L, int K, int d) {
  check_hypotheses(a, b, d);
  if (L < 0 || K < 0) throw std::invalid_argument("negative cutoff");
  // a lives on the L-ball, b on the (L+K)-cube; targets |k| <= K stay clear of
  // wraparound when M > 2L + 2K.
  const int M = fft_size_at_least(2 * L + 2 * K + 1);
  auto& fft = detail::complex_fft(d, M);
  const std::size_t total = fft.count();
  cplx* buf = fft.data();
  auto wrap = [M](int v) { return static_cast<std::size_t>(v < 0 ? v + M : v); };
  auto offset = [&](const Point& l) {
    std::size_t off = 0;
    for (int ax = 0; ax < d; ++ax) off = off * M + wrap(l[ax]);
    return off;
  };

  std::fill(buf, buf + total, cplx{});
  auto ball = make_lattice(d, L);
  for (const auto& l : ball->points()) buf[offset(l)] = multiplier_weight(l, a);
  fft.forward();
  std::vector<cplx> fa(buf, buf + total);

  std::fill(buf, buf + total, cplx{});
  const int R = L + K;
  const int r1 = d >= 2 ? R : 0, r2 = d >= 3 ? R : 0;
  for (int x = -R; x <= R; ++x)
    for (int y = -r1; y <= r1; ++y)
      for (int z = -r2; z <= r2; ++z) {
        Point l{x, y, z};
        buf[offset(l)] = multiplier_weight(l, b);
      }
  fft.forward();
  for (std::size_t i = 0; i < total; ++i) buf[i] *= fa[i];
  fft.backward();

  double sup = 0.0;
  auto probes = make_lattice(d, K);
  for (const auto& k : probes->points()) {
    const double conv = buf[offset(k)].real() / static_cast<double>(total);
    sup = std::max(sup, conv / multiplier_weight(k, d + a + b));
  }
  return sup;
}

double conv_bound_ratio_direct(double a, double b, int L, int K, int d) {
  check_hypotheses(a, b, d);
  auto ball = make_lattice(d, L);
  auto probes = make_lattice(d, K);
  double sup = 0.0;
  for (const auto& k : probes->points()) {
    double s = 0.0;
    for (const auto& l : ball->points()) {
      Point m{k[0] - l[0], k[1] - l[1], k[2] - l[2]};
      s += multiplier_weight(l, a) * multiplier_weight(m, b);
    }
    sup = std::max(sup, s / multiplier_weight(k, d + a + b));
  }
  return sup;
}

bool subset_sums_admissible(std::span<const double> a, int d) {
  const std::size_t k = a.size();
  if (k > 20) throw std::invalid_argument("too many exponents to enumerate");
  for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
    double s = 0.0;
    int size = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1u) {
        s += a[i];
        ++size;
      }
    if (!(s < -(size - 1) * static_cast<double>(d))) return false;
  }
  return true;
}

}  // namespace wickstat
