#include "wickstat/lattice.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace wickstat {

double bracket(const Point& l) { return std::sqrt(static_cast<double>(norm2(l)) + 1.0); }

double multiplier_weight(const Point& l, double alpha) {
  if (alpha == 0.0) return 1.0;
  return std::pow(static_cast<double>(norm2(l)) + 1.0, 0.5 * alpha);
}

Lattice::Lattice(int d, int N) : d_(d), N_(N) {
  if (d < 1 || d > 3) throw std::invalid_argument("lattice dimension must be 1, 2 or 3");
  if (N < 0) throw std::invalid_argument("lattice cutoff must be nonnegative");
  const int side = 2 * N + 1;
  std::size_t cube = 1;
  for (int a = 0; a < d; ++a) cube *= static_cast<std::size_t>(side);
  cube_.assign(cube, -1);

  const int r2 = N * N;
  const int hi1 = d >= 2 ? N : 0;
  const int hi2 = d >= 3 ? N : 0;
  for (int a = -N; a <= N; ++a) {
    for (int b = -hi1; b <= hi1; ++b) {
      for (int c = -hi2; c <= hi2; ++c) {
        Point l{a, b, c};
        int n2 = norm2(l);
        if (n2 > r2) continue;
        std::size_t off = 0;
        for (int ax = 0; ax < d; ++ax) off = off * side + static_cast<std::size_t>(l[ax] + N);
        cube_[off] = static_cast<int>(points_.size());
        points_.push_back(l);
        norm2_.push_back(n2);
      }
    }
  }
}

std::ptrdiff_t Lattice::find(const Point& l) const {
  const int side = 2 * N_ + 1;
  std::size_t off = 0;
  for (int ax = 0; ax < d_; ++ax) {
    if (l[ax] < -N_ || l[ax] > N_) return -1;
    off = off * side + static_cast<std::size_t>(l[ax] + N_);
  }
  for (int ax = d_; ax < 3; ++ax)
    if (l[ax] != 0) return -1;
  return cube_[off];
}

LatticePtr make_lattice(int d, int N) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, LatticePtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{d, N}];
  if (!slot) slot = std::make_shared<const Lattice>(d, N);
  return slot;
}

std::uint32_t Lattice::mode_key(std::size_t i) const {
  const Point& l = points_[i];
  auto zz = [](int v) { return static_cast<std::uint64_t>(v >= 0 ? 2 * static_cast<std::int64_t>(v) : -2 * static_cast<std::int64_t>(v) - 1); };
  std::uint64_t k = zz(l[d_ - 1]);
  for (int a = d_ - 2; a >= 0; --a) {
    const std::uint64_t x = zz(l[a]);
    k = (x + k) * (x + k + 1) / 2 + k;
    if (k > UINT32_MAX) break;
  }
  if (k > UINT32_MAX) throw std::overflow_error("mode key does not fit in 32 bits");
  return static_cast<std::uint32_t>(k);
}

}  // namespace wickstat
