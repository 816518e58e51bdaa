#include <doctest.h>

#include <chrono>
#include <cmath>
#include <vector>

#include "wickstat/ou.hpp"
#include "wickstat/renorm.hpp"

using namespace wickstat;

TEST_CASE("c1 closed forms") {
  const ModelParams p = phi4(1, 2.0);
  CHECK(c1(p, 1, 0.0) == doctest::Approx(1.0 / kPi).epsilon(1e-14));
  for (int d = 1; d <= 3; ++d) CHECK(c1(phi4(d, 2.0), 0, 0.3) == doctest::Approx(std::pow(kTwoPi, -d)));
  double prev = 0.0;
  for (int N = 0; N <= 20; ++N) {
    const double c = c1(phi4(2, 1.5), N, -0.2);
    CHECK(c > 0.0);
    CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("c1 is the pointwise variance of the filtered field") {
  const ModelParams p = phi4(1, 0.75);
  const int N = 16, R = 10000;
  const double alpha = 0.1;
  auto lat = make_lattice(1, N);
  const OuTables t = ou_tables(p, *lat);
  double s = 0.0, s2 = 0.0;
  for (int r = 0; r < R; ++r) {
    RngStream g(3, static_cast<std::uint64_t>(r), Purpose::Test);
    SpectralField z(lat);
    sample_stationary(t, z, g);
    const SpectralField f = apply_multiplier(z, alpha);
    double x = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) x += f[i].real();
    x /= std::sqrt(kTwoPi);
    s += x * x;
    s2 += x * x * x * x;
  }
  const double m = s / R, se = std::sqrt((s2 / R - m * m) / R);
  CHECK(std::abs(m - c1(p, N, alpha)) < 4 * se);
}

TEST_CASE("factor covariance of the phi4 family is c1") {
  const ModelParams p = phi4(2, 2.0);
  const auto C = factor_covariance(p, 6);
  REQUIRE(C.size() == 9);
  for (double c : C) CHECK(c == doctest::Approx(c1(p, 6, 0.0)));
}

TEST_CASE("c2 with one factor reduces to a single sum") {
  ModelParams p;
  p.d = 1;
  p.sigma = 2.0;
  p.k = 1;
  p.n = {0.0, 0.0};
  // l = 0 gives 1/2, l = +-1 give (1/2)/4 each
  CHECK(c2_brute(p, 1, 0.0) == doctest::Approx(0.75 / kTwoPi).epsilon(1e-14));
  // alpha enters twice: <l>^{2 alpha} / (2 <l>^{2 sigma})
  double hand = 0.0;
  for (int l = -3; l <= 3; ++l) hand += std::pow(1.0 + l * l, 0.3) / (2.0 * std::pow(1.0 + l * l, 2.0));
  CHECK(c2_brute(p, 3, 0.3) == doctest::Approx(hand / kTwoPi).epsilon(1e-13));
}

TEST_CASE("c2 by hand for two factors") {
  const ModelParams p = kpz_like();
  // k = 2, N = 1, alpha = 0: 2!/(2pi)^2 sum over l1, l2 with |l1 + l2| <= 1
  double hand = 0.0;
  auto b = [](int l) { return 1.0 + l * l; };
  for (int a = -1; a <= 1; ++a)
    for (int c = -1; c <= 1; ++c) {
      const int q = a + c;
      if (std::abs(q) > 1) continue;
      const double fa = std::pow(b(a), 0.5) / b(a);  // <l>^{n_1 - sigma}
      const double fc = std::pow(b(c), 0.5) / b(c);
      hand += fa * fc / (b(a) + b(c) + b(q));
    }
  hand *= 2.0 / (kTwoPi * kTwoPi);
  CHECK(c2_brute(p, 1, 0.0) == doctest::Approx(hand).epsilon(1e-14));
}

TEST_CASE("fast and brute agree") {
  SUBCASE("d=1 k=3 sigma=3/4") {
    const ModelParams p = phi4(1, 0.75);
    const double b = c2_brute(p, 8, 0.0), f = c2_fast(p, 8, 0.0);
    CHECK(std::abs(f - b) / std::abs(b) < 1e-6);
  }
  SUBCASE("d=2 k=2") {
    ModelParams p;
    p.d = 2;
    p.sigma = 2.0;
    p.k = 2;
    p.n = {0.0, 0.0, 0.0};
    const double b = c2_brute(p, 4, 0.0), f = c2_fast(p, 4, 0.0);
    CHECK(std::abs(f - b) / std::abs(b) < 1e-6);
  }
  SUBCASE("nonzero exponents") {
    ModelParams p = phi4(1, 1.2);
    p.m = 0.1;
    p.n = {0.2, -0.1, 0.0, 0.3};
    for (double a : {-0.2, 0.15}) {
      const double b = c2_brute(p, 6, a), f = c2_fast(p, 6, a);
      CHECK(std::abs(f - b) / std::abs(b) < 1e-6);
    }
  }
  SUBCASE("general multipliers") {
    const ModelParams p = kpz_multipliers();
    for (int N : {2, 5, 9}) {
      const auto s = c2_brute_sum(p, N, 0.0);
      CHECK(std::abs(s.imag) <= 1e-14 * s.abs_sum);
      CHECK(std::abs(c2_fast(p, N, 0.0) - s.value) <= 1e-6 * s.abs_sum);
    }
  }
}

TEST_CASE("KPZ multipliers leave a nonzero real part") {
  // The derivative factors pair as (i l_1)(i l_2) = -l_1 l_2 and N_0 = -1, so
  // the summand is l_1 l_2 times a symmetric weight; the l_1 = -l_2 diagonal
  // contributes -l^2 terms that nothing cancels.
  const ModelParams p = kpz_multipliers();
  const auto s = c2_brute_sum(p, 4, 0.0);
  CHECK(std::abs(s.value) > 1e-3 * s.abs_sum);
}

TEST_CASE("parallel brute sums match the serial ones") {
  const ModelParams p = phi4(2, 2.0);
  CHECK(c2_brute(p, 3, 0.0, 4) == doctest::Approx(c2_brute(p, 3, 0.0, 1)).epsilon(1e-13));
}

TEST_CASE("brute guard") {
  CHECK_THROWS_WITH_AS(c2_brute(phi4(3, 2.0), 40, 0.0), doctest::Contains("c2_fast"), std::length_error);
}

TEST_CASE("phi4_3 fast constants are quick and increasing") {
  const ModelParams p = phi4(3, 2.0);
  const auto t0 = std::chrono::steady_clock::now();
  double prev = 0.0;
  for (int N : {2, 4, 8, 16}) {
    const double c = c2_fast(p, N, -0.2);
    CHECK(c > prev);
    prev = c;
  }
  CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 60.0);
}

TEST_CASE("method selection") {
  CHECK(renorm_constants(phi4(1, 0.75), 16, 0.0).method == RenormConstants::Method::Brute);
  CHECK(renorm_constants(phi4(3, 2.0), 8, -0.2).method == RenormConstants::Method::Fast);
  CHECK(to_string(RenormConstants::Method::Fast) == "fast");
}

TEST_CASE("growth fits") {
  const std::vector<int> Ns{256, 512, 1024, 2048, 4096};
  SUBCASE("strict fractional model grows like a power") {
    // the observed exponent itself is compared in the acceptance run
    const ModelParams p = phi4(1, 0.7);
    const auto r = compute_exponents(p);
    const double a = r.alpha0 + 0.05;
    std::vector<double> c;
    for (int N : Ns) c.push_back(c2_fast(p, N, a));
    const auto g = growth_rate_fit(Ns, c, r.delta(a));
    CHECK(!g.log_mode);
    CHECK(g.slope > 0.0);
    CHECK(g.r2 > 0.99);
    CHECK(g.rel_deviation == doctest::Approx(std::abs(g.slope - r.delta(a)) / r.delta(a)));
  }
  SUBCASE("borderline model grows like log N") {
    const ModelParams p = phi4(1, 0.75);
    std::vector<double> c;
    for (int N : Ns) c.push_back(c2_fast(p, N, 0.0));
    const auto g = growth_rate_fit(Ns, c, 0.0);
    CHECK(g.log_mode);
    CHECK(g.r2 > 0.99);
    CHECK(g.matches);
  }
  SUBCASE("constant sequence is flagged") {
    const std::vector<double> c(Ns.size(), 2.0);
    const auto g = growth_rate_fit(Ns, c, 0.3);
    CHECK(std::abs(g.slope) < 1e-12);
    CHECK(!g.matches);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(growth_rate_fit(std::vector<int>{1, 2, 4}, std::vector<double>{1, 2, 3}, 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(growth_rate_fit(std::vector<int>{1, 2, 3, 4}, std::vector<double>{1, 2, 3, 4}, 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(growth_rate_fit(Ns, std::vector<double>{1, 2, 3, 2, 5}, 0.1), std::domain_error);
  }
}
