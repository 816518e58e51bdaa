#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "wickstat/hermite.hpp"

using namespace wickstat;

namespace {

CovarianceMatrix random_covariance(int n, unsigned seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> z;
  std::vector<double> B(static_cast<std::size_t>(n * n));
  for (auto& b : B) b = z(g);
  CovarianceMatrix C(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int l = 0; l < n; ++l) s += B[static_cast<std::size_t>(i * n + l)] * B[static_cast<std::size_t>(j * n + l)];
      C(i, j) = s / n + (i == j ? 0.1 : 0.0);
    }
  return C;
}

// :x_S: as a sum over partial matchings with sign (-1)^{pairs}
double wick_by_matchings(const std::vector<double>& x, const CovarianceMatrix& C, std::vector<int> idx) {
  if (idx.empty()) return 1.0;
  const int a = idx.back();
  idx.pop_back();
  double s = x[static_cast<std::size_t>(a)] * wick_by_matchings(x, C, idx);
  for (std::size_t j = 0; j < idx.size(); ++j) {
    std::vector<int> rest = idx;
    const int b = rest[j];
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(j));
    s -= C(a, b) * wick_by_matchings(x, C, rest);
  }
  return s;
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

}  // namespace

TEST_CASE("Hermite generating function") {
  for (double c : {0.5, 1.0, 2.3})
    for (double x : {-1.7, 0.0, 0.4, 2.2}) {
      const double t = 0.3;
      double s = 0.0;
      for (int k = 0; k <= 40; ++k) s += hermite_eval(k, x, c) * std::pow(t, k) / factorial(k);
      CHECK(s == doctest::Approx(std::exp(t * x - c * t * t / 2)).epsilon(1e-12));
    }
}

TEST_CASE("Hermite recurrence, coefficients and low orders") {
  const double c = 1.3;
  for (double x : {-2.0, -0.3, 0.9, 3.1}) {
    CHECK(hermite_eval(0, x, c) == 1.0);
    CHECK(hermite_eval(1, x, c) == x);
    CHECK(hermite_eval(2, x, c) == doctest::Approx(x * x - c));
    CHECK(hermite_eval(3, x, c) == doctest::Approx(x * x * x - 3 * c * x));
    CHECK(hermite_eval(4, 0.0, c) == doctest::Approx(3 * c * c));
    for (int k = 1; k < 12; ++k) {
      const double lhs = hermite_eval(k + 1, x, c);
      const double rhs = x * hermite_eval(k, x, c) - k * c * hermite_eval(k - 1, x, c);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
      const auto q = hermite_coeffs(k, c);
      double v = 0.0;
      for (int j = k; j >= 0; --j) v = v * x + q[static_cast<std::size_t>(j)];
      CHECK(v == doctest::Approx(hermite_eval(k, x, c)).epsilon(1e-12));
    }
  }
}

TEST_CASE("Hermite orthogonality from Isserlis moments") {
  for (double c : {0.7, 1.0, 1.9}) {
    CovarianceMatrix C(1, c);
    for (int j = 0; j <= 5; ++j)
      for (int k = 0; k <= 5; ++k) {
        const auto a = hermite_coeffs(j, c), b = hermite_coeffs(k, c);
        double e = 0.0;
        for (int p = 0; p <= j; ++p)
          for (int q = 0; q <= k; ++q) {
            const int beta[] = {p + q};
            e += a[static_cast<std::size_t>(p)] * b[static_cast<std::size_t>(q)] * isserlis_moment(C, beta);
          }
        const double expect = j == k ? factorial(k) * std::pow(c, k) : 0.0;
        CHECK(std::abs(e - expect) < 1e-10 * (1.0 + expect));
      }
  }
}

TEST_CASE("Isserlis moments of small orders") {
  const CovarianceMatrix C = random_covariance(3, 2);
  const int b4[] = {4, 0, 0};
  CHECK(isserlis_moment(C, b4) == doctest::Approx(3 * C(0, 0) * C(0, 0)));
  const int b22[] = {2, 2, 0};
  CHECK(isserlis_moment(C, b22) == doctest::Approx(C(0, 0) * C(1, 1) + 2 * C(0, 1) * C(0, 1)));
  const int odd[] = {1, 1, 1};
  CHECK(isserlis_moment(C, odd) == 0.0);
}

TEST_CASE("Wick monomials match the matching expansion, k <= 5") {
  std::mt19937_64 g(17);
  std::normal_distribution<double> z;
  for (int k = 1; k <= 5; ++k) {
    const CovarianceMatrix C = random_covariance(k, 40 + k);
    std::vector<double> x(static_cast<std::size_t>(k));
    for (auto& v : x) v = z(g);
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    const double ref = wick_by_matchings(x, C, idx);
    CHECK(wick_monomial(x, C) == doctest::Approx(ref).epsilon(1e-10));
    std::vector<double> all(std::size_t{1} << k);
    wick_all_subsets(x, C, all);
    for (std::size_t mask = 0; mask < all.size(); ++mask) {
      std::vector<int> sub;
      for (int i = 0; i < k; ++i)
        if (mask >> i & 1u) sub.push_back(i);
      CHECK(all[mask] == doctest::Approx(wick_by_matchings(x, C, sub)).epsilon(1e-10));
    }
  }
}

TEST_CASE("equal variables give Hermite polynomials") {
  const double c = 0.8;
  for (int k = 1; k <= 6; ++k) {
    CovarianceMatrix C(k, c);
    std::vector<double> x(static_cast<std::size_t>(k), 1.37);
    CHECK(wick_monomial(x, C) == doctest::Approx(hermite_eval(k, 1.37, c)).epsilon(1e-12));
  }
}

TEST_CASE("E[:f: :g:] is the permanent of cross covariances, k <= 5") {
  for (int k = 1; k <= 5; ++k) {
    const int n = 2 * k;
    const CovarianceMatrix S = random_covariance(n, 90 + k);
    SquareMatrix A{k, std::vector<double>(static_cast<std::size_t>(k * k))};
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) A.a[static_cast<std::size_t>(i * k + j)] = S(i, k + j);

    // Expand both Wick monomials into matchings and take Isserlis moments of
    // the leftover monomials.
    double brute = 0.0;
    std::function<void(std::vector<int>, std::vector<int>, double)> expand;
    expand = [&](std::vector<int> todo, std::vector<int> kept, double w) {
      if (todo.empty()) {
        // kept holds f-rest; combine with g expansion
        std::function<void(std::vector<int>, std::vector<int>, double)> gexp;
        gexp = [&](std::vector<int> gt, std::vector<int> gk, double gw) {
          if (gt.empty()) {
            std::vector<int> beta(static_cast<std::size_t>(n), 0);
            for (int i : kept) ++beta[static_cast<std::size_t>(i)];
            for (int i : gk) ++beta[static_cast<std::size_t>(i)];
            brute += w * gw * isserlis_moment(S, beta);
            return;
          }
          const int a = gt.back();
          gt.pop_back();
          auto gk2 = gk;
          gk2.push_back(a);
          gexp(gt, gk2, gw);
          for (std::size_t j = 0; j < gt.size(); ++j) {
            auto rest = gt;
            const int b = rest[j];
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(j));
            gexp(rest, gk, -gw * S(a, b));
          }
        };
        std::vector<int> g;
        for (int i = 0; i < k; ++i) g.push_back(k + i);
        gexp(g, {}, 1.0);
        return;
      }
      const int a = todo.back();
      todo.pop_back();
      auto k2 = kept;
      k2.push_back(a);
      expand(todo, k2, w);
      for (std::size_t j = 0; j < todo.size(); ++j) {
        auto rest = todo;
        const int b = rest[j];
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(j));
        expand(rest, kept, -w * S(a, b));
      }
    };
    std::vector<int> f;
    for (int i = 0; i < k; ++i) f.push_back(i);
    expand(f, {}, 1.0);
    CHECK(pairing_expectation(A) == doctest::Approx(brute).epsilon(1e-10));
  }
}

TEST_CASE("chaos expansion of a product of Wick monomials") {
  std::mt19937_64 g(5);
  std::normal_distribution<double> z;
  for (int k = 1; k <= 4; ++k) {
    const int n = 2 * k;
    const CovarianceMatrix S = random_covariance(n, 300 + k);
    SquareMatrix A{k, std::vector<double>(static_cast<std::size_t>(k * k))};
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) A.a[static_cast<std::size_t>(i * k + j)] = S(i, k + j);
    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto& v : x) v = z(g);
    std::vector<int> fi, gi;
    for (int i = 0; i < k; ++i) {
      fi.push_back(i);
      gi.push_back(k + i);
    }
    const double lhs = wick_by_matchings(x, S, fi) * wick_by_matchings(x, S, gi);
    double rhs = 0.0;
    std::size_t terms = 0;
    for (int r = 0; r <= k; ++r)
      for (const auto& t : chaos_product_projection(A, r)) {
        std::vector<int> rest = t.f_rest;
        for (int j : t.g_rest) rest.push_back(k + j);
        rhs += t.weight * wick_by_matchings(x, S, rest);
        ++terms;
      }
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    std::size_t expect = 0;
    for (int r = 0; r <= k; ++r) {
      const double b = std::tgamma(k + 1) / (std::tgamma(r + 1) * std::tgamma(k - r + 1));
      expect += static_cast<std::size_t>(std::llround(b * b));
    }
    CHECK(terms == expect);
  }
}

TEST_CASE("permanent guards and covariance helpers") {
  SquareMatrix A{9, std::vector<double>(81, 1.0)};
  std::vector<int> idx(9);
  for (int i = 0; i < 9; ++i) idx[static_cast<std::size_t>(i)] = i;
  CHECK_THROWS_WITH(permanent(A, idx, idx), doctest::Contains("permanent too large"));
  SquareMatrix J{3, std::vector<double>(9, 1.0)};
  CHECK(pairing_expectation(J) == doctest::Approx(6.0));
  const CovarianceMatrix C = random_covariance(4, 8);
  CHECK(C.is_symmetric());
  CHECK(C.is_psd());
  const auto L = C.cholesky();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int l = 0; l < 4; ++l) s += L[static_cast<std::size_t>(i * 4 + l)] * L[static_cast<std::size_t>(j * 4 + l)];
      CHECK(s == doctest::Approx(C(i, j)).epsilon(1e-12));
    }
  const int pick[] = {1, 3};
  const CovarianceMatrix R = C.restrict_to(pick);
  CHECK(R(0, 1) == C(1, 3));
  CovarianceMatrix bad(2, std::vector<double>{1.0, 2.0, 2.0, 1.0});
  CHECK_FALSE(bad.is_psd());
  const int high[] = {12};
  CHECK_THROWS(isserlis_moment(CovarianceMatrix(1, 1.0), high));
}
