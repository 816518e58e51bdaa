#include <doctest.h>

#include <random>

#include "wickstat/renorm.hpp"

using namespace wickstat;

TEST_CASE("phi4 in three dimensions") {
  const auto r = compute_exponents(phi4(3, 2.0));
  CHECK(r.A == doctest::Approx(-1.5));
  CHECK(r.alpha0 == doctest::Approx(-0.25));
  for (double a : {-0.3, 0.0, 0.7}) CHECK(r.delta(a) == doctest::Approx(4 * a + 1));
  CHECK(r.singular == SingularCondition::Strict);
  CHECK(r.singular_margin == doctest::Approx(-0.5));
  CHECK(r.w43_all());
  CHECK(r.subcritical_first);
  CHECK(r.subcritical_second);
  CHECK(classify_regime(phi4(3, 2.0)).regime == Regime::SingularStrict);
}

TEST_CASE("fractional phi4 at sigma 3/4 is borderline") {
  const auto r = compute_exponents(phi4(1, 0.75));
  CHECK(r.A == doctest::Approx(-0.375));
  CHECK(std::abs(r.alpha0) < 1e-14);
  CHECK(r.singular == SingularCondition::Borderline);
  CHECK(classify_regime(phi4(1, 0.75)).regime == Regime::SingularBorderline);
  CHECK(r.regularity_Z() == doctest::Approx(-0.125));
  CHECK(r.regularity_Y() == doctest::Approx(0.375));
}

TEST_CASE("KPZ-like exponents are borderline") {
  const auto r = compute_exponents(kpz_like());
  CHECK(r.A == doctest::Approx(-1.0));
  CHECK(std::abs(r.singular_margin) < 1e-14);
  CHECK(r.singular == SingularCondition::Borderline);
}

TEST_CASE("regime table") {
  CHECK(classify_regime(phi4(1, 0.7)).regime == Regime::SingularStrict);
  CHECK(classify_regime(phi4(1, 0.8)).regime == Regime::AbsolutelyContinuousExpected);
  CHECK(classify_regime(phi4(1, 1.0)).regime == Regime::AbsolutelyContinuousExpected);
  const auto two = classify_regime(phi4(2, 2.0));
  CHECK(two.regime == Regime::AbsolutelyContinuousExpected);
  CHECK(two.report.A + 1.0 == doctest::Approx(1.0));
  // below d/2 the second condition fails
  CHECK(classify_regime(phi4(1, 0.4)).regime == Regime::Supercritical);
  // a smoothing factor multiplier breaks the factor assumption while the
  // singularity condition still holds
  ModelParams p = phi4(1, 0.7);
  p.n = {0.5, -0.3, 0.0, 0.0};
  const auto v = classify_regime(p);
  CHECK(!v.report.w43_all());
  CHECK(v.report.singular == SingularCondition::Strict);
  CHECK(v.regime == Regime::AssumptionViolated);
}

TEST_CASE("alpha0 is a root of delta for random parameters") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> kd(2, 6), dd(1, 3);
  for (int t = 0; t < 1000; ++t) {
    ModelParams p;
    p.d = dd(gen);
    p.k = kd(gen);
    p.sigma = p.d * (0.5 + 0.75 * (u(gen) + 1.0));
    p.m = 0.5 * u(gen);
    p.n.clear();
    for (int i = 0; i <= p.k; ++i) p.n.push_back(u(gen));
    const auto r = compute_exponents(p);
    CHECK(std::abs(r.delta(r.alpha0)) < 1e-10);
    CHECK(r.delta(r.alpha0 + 1.0) - r.delta(r.alpha0) == doctest::Approx(p.k + 1.0));
  }
}

TEST_CASE("names") {
  CHECK(to_string(Regime::SingularBorderline) == "SingularBorderline");
  CHECK(to_string(SingularCondition::Strict) == "strict");
}
