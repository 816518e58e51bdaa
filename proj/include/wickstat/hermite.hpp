#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace wickstat {

// H_k(x; c) with generating function exp(t x - c t^2 / 2).
double hermite_eval(int k, double x, double c);
// Monomial coefficients q[0..k] of H_k(.; c).
std::vector<double> hermite_coeffs(int k, double c);

class CovarianceMatrix {
public:
  CovarianceMatrix() = default;
  explicit CovarianceMatrix(int n, double fill = 0.0);
  CovarianceMatrix(int n, std::vector<double> row_major);

  int size() const { return n_; }
  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * n_ + j)]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * n_ + j)]; }

  bool is_symmetric(double tol = 1e-14) const;
  double min_eigenvalue() const;
  bool is_psd(double floor = -1e-10) const { return min_eigenvalue() >= floor; }
  // Lower triangular L with L L^T = C (row major); requires positive definite.
  std::vector<double> cholesky() const;
  // Principal submatrix on the listed indices.
  CovarianceMatrix restrict_to(std::span<const int> idx) const;

private:
  int n_ = 0;
  std::vector<double> a_;
};

// :x_1 ... x_k: with respect to C, by the recursion on the first variable.
double wick_monomial(std::span<const double> x, const CovarianceMatrix& C);

// out[mask] = :prod_{i in mask} x_i: for every subset of {0..k-1}; out has
// 2^k entries. Each entry reuses the smaller subsets.
void wick_all_subsets(std::span<const double> x, const CovarianceMatrix& C, std::span<double> out);

// Square matrix stored row major.
struct SquareMatrix {
  int n = 0;
  std::vector<double> a;
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i * n + j)]; }
};

// E[:f_1..f_k: :g_1..g_k:] = sum over permutations of prod A(i, tau(i)).
double pairing_expectation(const SquareMatrix& A);
double permanent(const SquareMatrix& A, std::span<const int> rows, std::span<const int> cols);

// One term of the projection of :f_1..f_k: :g_1..g_k: onto chaos 2r: pair the
// f-indices in S with the g-indices in S2 (weight = permanent of A on S x S2)
// and keep the Wick monomial of the unpaired f_rest and g_rest.
struct ChaosTerm {
  std::vector<int> S, S2;
  double weight;
  std::vector<int> f_rest, g_rest;
};
std::vector<ChaosTerm> chaos_product_projection(const SquareMatrix& A, int r);

// E[prod x_i^{beta_i}] for centered Gaussian x with covariance C, by summing
// over perfect matchings. Total degree at most 10.
double isserlis_moment(const CovarianceMatrix& C, std::span<const int> beta);

}  // namespace wickstat
