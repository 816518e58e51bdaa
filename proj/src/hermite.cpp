#include "wickstat/hermite.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace wickstat {

double hermite_eval(int k, double x, double c) {
  if (k < 0) throw std::invalid_argument("negative Hermite order");
  if (k == 0) return 1.0;
  double hm = 1.0, h = x;
  for (int j = 1; j < k; ++j) {
    double hp = x * h - j * c * hm;
    hm = h;
    h = hp;
  }
  return h;
}

std::vector<double> hermite_coeffs(int k, double c) {
  if (k < 0) throw std::invalid_argument("negative Hermite order");
  std::vector<double> prev{1.0};
  if (k == 0) return prev;
  std::vector<double> cur{0.0, 1.0};
  for (int j = 1; j < k; ++j) {
    std::vector<double> next(static_cast<std::size_t>(j + 2), 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= j * c * prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

CovarianceMatrix::CovarianceMatrix(int n, double fill)
    : n_(n), a_(static_cast<std::size_t>(n * n), fill) {}

CovarianceMatrix::CovarianceMatrix(int n, std::vector<double> row_major) : n_(n), a_(std::move(row_major)) {
  if (a_.size() != static_cast<std::size_t>(n * n)) throw std::invalid_argument("covariance size mismatch");
}

bool CovarianceMatrix::is_symmetric(double tol) const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < i; ++j)
      if (std::abs((*this)(i, j) - (*this)(j, i)) > tol * std::max(1.0, std::abs((*this)(i, j)))) return false;
  return true;
}

double CovarianceMatrix::min_eigenvalue() const {
  if (n_ == 0) return 0.0;
  Eigen::MatrixXd m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

std::vector<double> CovarianceMatrix::cholesky() const {
  Eigen::MatrixXd m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j);
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw std::domain_error("covariance is not positive definite");
  Eigen::MatrixXd L = llt.matrixL();
  std::vector<double> out(static_cast<std::size_t>(n_ * n_));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) out[static_cast<std::size_t>(i * n_ + j)] = L(i, j);
  return out;
}

CovarianceMatrix CovarianceMatrix::restrict_to(std::span<const int> idx) const {
  const int n = static_cast<int>(idx.size());
  CovarianceMatrix r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = (*this)(idx[i], idx[j]);
  return r;
}

void wick_all_subsets(std::span<const double> x, const CovarianceMatrix& C, std::span<double> out) {
  const int k = static_cast<int>(x.size());
  if (C.size() != k) throw std::invalid_argument("dimension mismatch");
  const std::size_t n = std::size_t{1} << k;
  if (out.size() < n) throw std::invalid_argument("output too small");
  out[0] = 1.0;
  for (std::size_t mask = 1; mask < n; ++mask) {
    const int i = std::countr_zero(mask);
    const std::size_t rest = mask & (mask - 1);
    double v = x[i] * out[rest];
    for (std::size_t r = rest; r; r &= r - 1) {
      const int j = std::countr_zero(r);
      v -= C(i, j) * out[rest ^ (std::size_t{1} << j)];
    }
    out[mask] = v;
  }
}

double wick_monomial(std::span<const double> x, const CovarianceMatrix& C) {
  const int k = static_cast<int>(x.size());
  if (C.size() != k) throw std::invalid_argument("dimension mismatch");
  if (k > 24) throw std::invalid_argument("Wick monomial order too large");
  std::vector<double> buf(std::size_t{1} << k);
  wick_all_subsets(x, C, buf);
  return buf.back();
}

double permanent(const SquareMatrix& A, std::span<const int> rows, std::span<const int> cols) {
  const int k = static_cast<int>(rows.size());
  if (static_cast<int>(cols.size()) != k) throw std::invalid_argument("dimension mismatch");
  if (k > 8) throw std::invalid_argument("permanent too large");
  if (k == 0) return 1.0;
  std::vector<int> tau(static_cast<std::size_t>(k));
  std::iota(tau.begin(), tau.end(), 0);
  double s = 0.0;
  do {
    double p = 1.0;
    for (int i = 0; i < k; ++i) p *= A(rows[i], cols[tau[i]]);
    s += p;
  } while (std::next_permutation(tau.begin(), tau.end()));
  return s;
}

double pairing_expectation(const SquareMatrix& A) {
  if (A.a.size() != static_cast<std::size_t>(A.n * A.n)) throw std::invalid_argument("dimension mismatch");
  if (A.n > 8) throw std::invalid_argument("permanent too large");
  std::vector<int> idx(static_cast<std::size_t>(A.n));
  std::iota(idx.begin(), idx.end(), 0);
  return permanent(A, idx, idx);
}

namespace {

void subsets_of_size(int k, int s, std::vector<std::vector<int>>& out) {
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    if (std::popcount(mask) != s) continue;
    std::vector<int> v;
    for (int i = 0; i < k; ++i)
      if (mask & (1u << i)) v.push_back(i);
    out.push_back(std::move(v));
  }
}

std::vector<int> complement(int k, const std::vector<int>& S) {
  std::vector<int> c;
  for (int i = 0; i < k; ++i)
    if (!std::binary_search(S.begin(), S.end(), i)) c.push_back(i);
  return c;
}

}  // namespace

std::vector<ChaosTerm> chaos_product_projection(const SquareMatrix& A, int r) {
  const int k = A.n;
  if (r < 0 || r > k) throw std::invalid_argument("target order out of range");
  std::vector<std::vector<int>> subsets;
  subsets_of_size(k, k - r, subsets);
  std::vector<ChaosTerm> terms;
  for (const auto& S : subsets) {
    for (const auto& S2 : subsets) {
      ChaosTerm t;
      t.S = S;
      t.S2 = S2;
      t.weight = permanent(A, S, S2);
      t.f_rest = complement(k, S);
      t.g_rest = complement(k, S2);
      terms.push_back(std::move(t));
    }
  }
  return terms;
}

namespace {

double matchings(const CovarianceMatrix& C, std::vector<int>& idx) {
  if (idx.empty()) return 1.0;
  const int a = idx.back();
  idx.pop_back();
  double s = 0.0;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const int b = idx[j];
    const double c = C(a, b);
    if (c == 0.0) continue;
    std::swap(idx[j], idx.back());
    idx.pop_back();
    s += c * matchings(C, idx);
    idx.push_back(b);
    std::swap(idx[j], idx.back());
  }
  idx.push_back(a);
  return s;
}

}  // namespace

double isserlis_moment(const CovarianceMatrix& C, std::span<const int> beta) {
  if (static_cast<int>(beta.size()) != C.size()) throw std::invalid_argument("dimension mismatch");
  std::vector<int> idx;
  for (int i = 0; i < C.size(); ++i) {
    if (beta[i] < 0) throw std::invalid_argument("negative exponent");
    for (int e = 0; e < beta[i]; ++e) idx.push_back(i);
  }
  if (idx.size() > 10) throw std::invalid_argument("moment degree exceeds 10");
  if (idx.size() % 2) return 0.0;
  return matchings(C, idx);
}

}  // namespace wickstat
