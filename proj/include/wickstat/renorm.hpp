#pragma once

#include <span>
#include <string>
#include <vector>

#include "wickstat/model.hpp"

namespace wickstat {

enum class SingularCondition { Strict, Borderline, Fails };
enum class Regime { AbsolutelyContinuousExpected, SingularStrict, SingularBorderline, AssumptionViolated, Supercritical };

std::string to_string(SingularCondition c);
std::string to_string(Regime r);

struct ExponentReport {
  ModelParams params;
  double A = 0.0;
  double alpha0 = 0.0;
  std::vector<bool> w43;  // one entry per factor i = 1..k
  bool subcritical_first = false;
  bool subcritical_second = false;
  // A + sigma/2 - (n_0 - m); borderline when zero up to rounding
  double singular_margin = 0.0;
  SingularCondition singular = SingularCondition::Fails;

  double delta(double alpha) const;
  bool w43_all() const;
  double regularity_Z() const;  // (sigma - d)/2 - m
  double regularity_Y() const;  // A - n_0 + sigma
};

ExponentReport compute_exponents(const ModelParams& p);

struct RegimeVerdict {
  Regime regime;
  ExponentReport report;
};

// Supercritical when the second subcriticality condition fails. When the
// singularity condition fails the verdict is AbsolutelyContinuousExpected; when
// it holds, AssumptionViolated flags a failed factor or first subcriticality
// condition, and otherwise the strict/borderline split is reported.
RegimeVerdict classify_regime(const ModelParams& p);

// (2pi)^{-d} sum_{|l|<=N} <l>^{2 alpha} |M(l)|^2 <l>^{-sigma}
double c1(const ModelParams& p, int N, double alpha);

// Covariances C_ij = E[(N_i Z_N)(N_j Z_N)], i, j = 1..k.
std::vector<double> factor_covariance(const ModelParams& p, int N);

struct C2Sum {
  double value = 0.0;     // real part of the lattice sum
  double imag = 0.0;      // imaginary part, zero for real operators
  double abs_sum = 0.0;   // same sum with every term replaced by its modulus
  std::size_t terms = 0;
};

inline constexpr double kBruteTermLimit = 1e9;

// k! (2pi)^{-dk} sum over l_1..l_k in the ball with |q| <= N, q = sum l_i, of
//   <q>^alpha N_0(q) / (sum <l_i>^sigma + <q>^sigma) prod N_i(l_i) <l_i>^alpha |M(l_i)|^2 <l_i>^{-sigma}
C2Sum c2_brute_sum(const ModelParams& p, int N, double alpha, int workers = 1);
double c2_brute(const ModelParams& p, int N, double alpha, int workers = 1);

struct QuadratureSpec {
  double rel_tol = 1e-8;
  int min_levels = 3;
  int max_levels = 12;
  double initial_step = 0.5;
};

struct C2FastResult {
  double value = 0.0;
  double last_change = 0.0;  // |I_h - I_{2h}|
  double scale = 0.0;        // integral of |integrand|
  int levels = 0;
  std::size_t nodes = 0;
};

// Same sum written as an integral over s of a k-fold lattice convolution of
// exp(-s <l>^sigma)-damped kernels, evaluated by FFT on a wrap-free cyclic grid
// and an exp-sinh trapezoid rule in s.
C2FastResult c2_fast_detail(const ModelParams& p, int N, double alpha, const QuadratureSpec& q = {});
double c2_fast(const ModelParams& p, int N, double alpha, const QuadratureSpec& q = {});

struct RenormConstants {
  enum class Method { Brute, Fast };
  int N = 0;
  double alpha = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  Method method = Method::Fast;
};
std::string to_string(RenormConstants::Method m);

// Brute force when the term count allows, otherwise the fast route.
RenormConstants renorm_constants(const ModelParams& p, int N, double alpha, int workers = 1);

struct GrowthFit {
  bool log_mode = false;
  double slope = 0.0;      // power mode: d log c2 / d log N; log mode: d c2 / d log N
  double intercept = 0.0;
  double r2 = 0.0;
  double delta = 0.0;
  double rel_deviation = 0.0;  // power mode: |slope - delta| / |delta|
  bool matches = false;        // power: deviation <= tolerance; log: r2 >= threshold
};

// Throws on fewer than four points, non-geometric spacing, or a sequence that
// decreases somewhere.
GrowthFit growth_rate_fit(std::span<const int> Ns, std::span<const double> c2, double delta,
                          double slope_tolerance = 0.10, double r2_threshold = 0.99);

// sup over |k| <= K of sum_{|l| <= L} <l>^a <k - l>^b / <k>^{d + a + b}
double conv_bound_ratio(double a, double b, int L, int K, int d);
// Same quantity by direct double summation; small cutoffs only.
double conv_bound_ratio_direct(double a, double b, int L, int K, int d);

// Every nonempty subset S satisfies sum_S a_i < -(|S| - 1) d.
bool subset_sums_admissible(std::span<const double> a, int d);

}  // namespace wickstat
