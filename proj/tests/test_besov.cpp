#include <doctest.h>

#include <cmath>

#include "wickstat/besov.hpp"
#include "wickstat/rng.hpp"

using namespace wickstat;

namespace {

SpectralField random_field(int d, int N, double decay, std::uint64_t seed) {
  auto lat = make_lattice(d, N);
  SpectralField f(lat);
  RngStream rng(seed, 0, Purpose::Test);
  const std::size_t n = lat->size(), z = n / 2;
  f[z] = rng.gaussian_pair(0)[0];
  for (std::size_t i = z + 1; i < n; ++i) {
    const auto g = rng.gaussian_pair(static_cast<std::uint32_t>(i));
    const double s = multiplier_weight(lat->point(i), -decay);
    f[i] = cplx{s * g[0], s * g[1]};
    f[n - 1 - i] = std::conj(f[i]);
  }
  return f;
}

SpectralField product(const SpectralField& f, const SpectralField& g) {
  const int N = f.cutoff() + g.cutoff();
  const int M = fft_size_at_least(2 * N + 1);
  PhysicalGrid a = to_physical(f, M);
  const PhysicalGrid b = to_physical(g, M);
  for (std::size_t x = 0; x < a.values.size(); ++x) a.values[x] *= b.values[x];
  // values are point values; from_physical returns coefficients of that function
  return from_physical(a, N);
}

}  // namespace

TEST_CASE("bump") {
  CHECK(dyadic_bump(0.0) == 1.0);
  CHECK(dyadic_bump(1.0) == 1.0);
  CHECK(dyadic_bump(2.0) == 0.0);
  CHECK(dyadic_bump(3.0) == 0.0);
  double prev = 1.0;
  for (double r = 1.0; r <= 2.0; r += 0.01) {
    CHECK(dyadic_bump(r) <= prev);
    prev = dyadic_bump(r);
  }
  CHECK(dyadic_bump(1.5) == doctest::Approx(0.5));
}

TEST_CASE("partition of unity and supports") {
  for (int d = 1; d <= 3; ++d) {
    const int N = d == 1 ? 200 : (d == 2 ? 40 : 12);
    const DyadicPartition P(d, N);
    const Lattice& lat = *make_lattice(d, N);
    CHECK(std::ldexp(1.0, P.last_block() + 1) >= N);
    for (std::size_t i = 0; i < lat.size(); ++i) {
      double s = 0.0;
      for (int m = -1; m <= P.last_block(); ++m) {
        const double w = P.weight(m, i);
        CHECK(w >= 0.0);
        s += w;
        const double r = std::sqrt(static_cast<double>(lat.norm2_at(i)));
        if (m >= 0 && (r < std::ldexp(1.0, m) || r > std::ldexp(1.0, m + 2))) CHECK(w == 0.0);
        if (m == -1 && r > 4.0) CHECK(w == 0.0);
      }
      CHECK(std::abs(s - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("blocks") {
  const DyadicPartition P(1, 64);
  auto lat = make_lattice(1, 64);
  const auto e0 = basis_mode(lat, {0, 0, 0});
  const auto b = lp_block(e0, -1, P);
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(b[i] == e0[i]);
  const auto f = random_field(1, 64, 0.3, 1);
  SpectralField s(lat);
  for (int m = -1; m <= P.last_block(); ++m) s += lp_block(f, m, P);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(s[i] - f[i]) < 1e-12);
  // e_l with |l| = 20 only lives in blocks 3 and 4
  const auto e = basis_mode(lat, {20, 0, 0});
  for (int m = 0; m <= P.last_block(); ++m) {
    const double n2 = l2_norm2(lp_block(e, m, P));
    if (m == 3 || m == 4)
      CHECK(n2 >= 0.0);
    else
      CHECK(n2 == 0.0);
  }
  CHECK_THROWS_AS(lp_block(f, -2, P), std::out_of_range);
  CHECK_THROWS_AS(lp_block(f, P.last_block() + 1, P), std::out_of_range);
  CHECK(P.last_complete_block() == 4);
}

TEST_CASE("norms") {
  auto lat = make_lattice(2, 16);
  CHECK(besov_norm(SpectralField(lat), 0.7) == 0.0);
  const auto e0 = basis_mode(lat, {0, 0, 0});
  for (double a : {-1.0, 0.0, 2.5}) CHECK(besov_norm(e0, a) == doctest::Approx(1.0 / kTwoPi).epsilon(1e-12));
  // a single cosine in block m >= 0 contributes amplitude times 2^{alpha m}
  auto l1 = make_lattice(1, 64);
  const auto c = cosine_mode(l1, {40, 0, 0}, 2.0);
  const DyadicPartition P(1, 64);
  const auto sup = block_sup_norms(c, P);
  double total = 0.0;
  for (std::size_t m = 0; m < sup.size(); ++m) total += sup[m];
  CHECK(total == doctest::Approx(2.0).epsilon(1e-10));
  // l^1 over blocks of the L^2 norms at alpha = 0 bounds the L^2 norm
  CHECK(besov_norm(c, 0.0, 2.0, 1.0) >= std::sqrt(l2_norm2(c)) - 1e-12);
}

TEST_CASE("norm is monotone in alpha") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto f = random_field(1, 128, 0.5, s);
    double prev = 0.0;
    for (double a = -1.0; a <= 1.0; a += 0.25) {
      const double n = besov_norm(f, a);
      CHECK(n >= prev);
      prev = n;
    }
  }
}

TEST_CASE("regularity of a lacunary field") {
  const double alpha = 0.3;
  const auto e = synthetic_ensemble(1, 1024, alpha, 10, 100, 4);
  const auto r = estimate_regularity(e);
  CHECK(std::abs(r.exponent - alpha) < 0.05);
  CHECK(r.lower <= r.exponent);
  CHECK(r.upper >= r.exponent);
  CHECK(r.blocks.size() == 5);
  CHECK(r.samples == 100);
}

TEST_CASE("regularity estimator errors") {
  const auto few = synthetic_ensemble(1, 1024, 0.3, 10, 20, 4);
  CHECK_THROWS(estimate_regularity(few));
  const auto small = synthetic_ensemble(1, 16, 0.3, 4, 100, 4);
  CHECK_THROWS_WITH(estimate_regularity(small), doctest::Contains("blocks"));
  CHECK_THROWS(synthetic_field(1, 8, 0.3, 4));
}

TEST_CASE("smoothing of projections") {
  const auto f = synthetic_field(1, 1024, 0.4, 10, 0.3);
  const std::vector<int> Ns{2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
  const auto r0 = smoothing_check(f, 0.4, 0.0, Ns);
  CHECK(r0.max_ratio <= 1.0 + 1e-10);
  const auto r1 = smoothing_check(f, 0.4, 0.2, Ns);
  CHECK(r1.ratios.size() == Ns.size());
  CHECK(r1.max_ratio < 4.0);
  // bounded: the top half of the grid does not grow
  CHECK(r1.ratios.back() <= 1.1 * r1.ratios[Ns.size() / 2]);
}

TEST_CASE("product estimate constant stays bounded") {
  const double a = 0.6, b = -0.3;
  double K = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto f = random_field(1, 32, 0.5 + a, 2 * s);
    const auto g = random_field(1, 32, 0.5 + b, 2 * s + 1);
    const double r = besov_norm(product(f, g), std::min(a, b)) / (besov_norm(f, a) * besov_norm(g, b));
    CHECK(std::isfinite(r));
    K = std::max(K, r);
  }
  CHECK(K > 0.0);
  CHECK(K < 50.0);
}

TEST_CASE("normalized products of rough fields vanish") {
  // f lies in C^{-0.2}, hence in C^{-0.45}; with alpha_i = -0.45 and gamma = 1
  // the target space is C^{0.1}
  const auto f = synthetic_field(1, 1024, -0.2, 10, 0.1);
  const double gamma = 1.0;
  double prev = kInf, first = 0.0;
  for (int N : {16, 64, 256, 1024}) {
    const auto p = project(f, N);
    const auto q = std::pow(static_cast<double>(N), -gamma) * product(p, p);
    const double n = besov_norm(q, 0.1);
    if (N == 16) first = n;
    CHECK(n < prev);
    prev = n;
  }
  CHECK(prev < 0.5 * first);
}
