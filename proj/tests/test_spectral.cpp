#include <doctest.h>

#include <cmath>
#include <random>

#include "wickstat/spectral.hpp"

using namespace wickstat;

namespace {

SpectralField random_real_field(int d, int N, unsigned seed) {
  auto lat = make_lattice(d, N);
  SpectralField f(lat);
  std::mt19937_64 g(seed);
  std::normal_distribution<double> n;
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = {n(g), n(g)};
  f.symmetrize();
  return f;
}

// (2pi)^{-d/2} sum_l c_l e^{i l.x} at one point
double naive_eval(const SpectralField& f, const std::array<double, 3>& x) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Point& l = f.lattice().point(i);
    double ph = 0.0;
    for (int a = 0; a < f.dim(); ++a) ph += l[a] * x[a];
    s += f[i] * std::polar(1.0, ph);
  }
  return s.real() * std::pow(kTwoPi, -0.5 * f.dim());
}

}  // namespace

TEST_CASE("fft sizes are 7-smooth and minimal") {
  auto smooth = [](int n) {
    for (int p : {2, 3, 5, 7})
      while (n % p == 0) n /= p;
    return n == 1;
  };
  for (int n = 1; n < 3000; ++n) {
    const int m = fft_size_at_least(n);
    CHECK(m >= n);
    CHECK(smooth(m));
    for (int j = n; j < m; ++j) CHECK_FALSE(smooth(j));
  }
}

TEST_CASE("to_physical agrees with a naive sum") {
  for (int d = 1; d <= 3; ++d) {
    const int N = d == 3 ? 2 : 4;
    const SpectralField f = random_real_field(d, N, 11 + d);
    const int M = fft_size_at_least(2 * N + 3);
    const PhysicalGrid g = to_physical(f, M);
    REQUIRE(g.values.size() == static_cast<std::size_t>(std::pow(M, d)));
    for (std::size_t j = 0; j < g.values.size(); j += 7) {
      std::array<double, 3> x{};
      std::size_t r = j;
      for (int a = d - 1; a >= 0; --a) {
        x[a] = kTwoPi * static_cast<double>(r % M) / M;
        r /= M;
      }
      CHECK(g.values[j] == doctest::Approx(naive_eval(f, x)).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("physical round trip and aliasing guard") {
  const SpectralField f = random_real_field(2, 6, 5);
  const SpectralField back = from_physical(to_physical(f, 13), 6);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(back[i] - f[i]) < 1e-12);
  CHECK_THROWS_WITH_AS(to_physical(f, 12), doctest::Contains("aliasing"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(from_physical(to_physical(f, 13), 7), doctest::Contains("aliasing"), std::invalid_argument);
}

TEST_CASE("cosine and basis modes") {
  auto lat = make_lattice(1, 4);
  const SpectralField c = cosine_mode(lat, {3, 0, 0}, 2.5);
  CHECK(c.is_hermitian());
  const PhysicalGrid g = to_physical(c, 16);
  for (int j = 0; j < 16; ++j) CHECK(g.values[j] == doctest::Approx(2.5 * std::cos(3 * kTwoPi * j / 16)));
  const SpectralField e0 = basis_mode(lat, {0, 0, 0});
  CHECK(to_physical(e0, 9).values[4] == doctest::Approx(std::pow(kTwoPi, -0.5)));
}

TEST_CASE("multipliers, projection and norms") {
  const SpectralField f = random_real_field(1, 8, 3);
  const SpectralField g = apply_multiplier(f, 1.5);
  for (std::size_t i = 0; i < f.size(); ++i)
    CHECK(std::abs(g[i] - f[i] * multiplier_weight(f.lattice().point(i), 1.5)) < 1e-14);
  const SpectralField p = project(f, 3);
  CHECK(p.size() == 7);
  CHECK(p.at({3, 0, 0}) == f.at({3, 0, 0}));
  const SpectralField e = extend(p, 8);
  CHECK(e.at({4, 0, 0}) == cplx{});
  CHECK(e.at({-2, 0, 0}) == f.at({-2, 0, 0}));
  CHECK_THROWS_AS(project(p, 5), std::invalid_argument);
  // Parseval on the grid
  const PhysicalGrid x = to_physical(f, 17);
  double s = 0.0;
  for (double v : x.values) s += v * v;
  CHECK(s * kTwoPi / 17 == doctest::Approx(l2_norm2(f)).epsilon(1e-12));
}

TEST_CASE("torus integrals of polynomials are exact") {
  const SpectralField f = random_real_field(1, 5, 9);
  const std::vector<double> q{0.3, -1.0, 0.5, 0.25, -0.125};
  // dense trapezoid oracle from the naive evaluator
  const int M = 400;
  double ref = 0.0;
  for (int j = 0; j < M; ++j) {
    const double v = naive_eval(f, {kTwoPi * j / M, 0.0, 0.0});
    double acc = 0.0;
    for (int p = 4; p >= 0; --p) acc = acc * v + q[static_cast<std::size_t>(p)];
    ref += acc;
  }
  ref *= kTwoPi / M;
  CHECK(torus_integral_of_polynomial(f, q) == doctest::Approx(ref).epsilon(1e-11));
  CHECK(torus_integral_of_polynomial(f, q, 64) == doctest::Approx(ref).epsilon(1e-11));
  CHECK_THROWS_AS(torus_integral_of_polynomial(f, q, 15), std::invalid_argument);
  const SpectralField z(make_lattice(2, 3));
  CHECK(torus_integral_of_polynomial(z, std::vector<double>{2.0}) == doctest::Approx(2.0 * kTwoPi * kTwoPi));
}
