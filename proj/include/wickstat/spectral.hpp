#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "wickstat/lattice.hpp"

namespace wickstat {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Fourier coefficients in the basis e_l(x) = (2pi)^{-d/2} exp(i l.x), indexed
// by the points of a Lattice. Real fields satisfy f(-l) = conj f(l); the
// operations below preserve that, but the container does not enforce it.
class SpectralField {
public:
  SpectralField() = default;
  explicit SpectralField(LatticePtr lat);
  SpectralField(LatticePtr lat, std::vector<cplx> coeffs);

  const Lattice& lattice() const { return *lat_; }
  const LatticePtr& lattice_ptr() const { return lat_; }
  int dim() const { return lat_->dim(); }
  int cutoff() const { return lat_->cutoff(); }
  std::size_t size() const { return c_.size(); }
  bool empty() const { return !lat_; }

  cplx& operator[](std::size_t i) { return c_[i]; }
  const cplx& operator[](std::size_t i) const { return c_[i]; }
  std::vector<cplx>& coeffs() { return c_; }
  const std::vector<cplx>& coeffs() const { return c_; }

  // Zero when l lies outside the lattice.
  cplx at(const Point& l) const;
  void set(const Point& l, cplx v);

  bool is_hermitian(double tol = 0.0) const;
  // Replace by the Hermitian part (f(l) + conj f(-l)) / 2.
  void symmetrize();

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s);

private:
  LatticePtr lat_;
  std::vector<cplx> c_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

// Single mode e_l with coefficient c (not Hermitian unless l = 0).
SpectralField basis_mode(LatticePtr lat, const Point& l, cplx c = 1.0);
// Real mode amp*cos(l.x) written in the e_l basis.
SpectralField cosine_mode(LatticePtr lat, const Point& l, double amp);

SpectralField apply_multiplier(const SpectralField& f, double alpha);
SpectralField apply_symbol(const SpectralField& f, const std::function<cplx(const Point&)>& symbol);

SpectralField project(const SpectralField& f, int N);
// Embed into a larger ball with zeros.
SpectralField extend(const SpectralField& f, int N);
// project or extend as needed
SpectralField resize(const SpectralField& f, int N);

// sum |f(l)|^2, equals the L^2 norm squared of the field
double l2_norm2(const SpectralField& f);

struct PhysicalGrid {
  int d = 1;
  int M = 0;
  std::vector<double> values;  // row major, first axis slowest

  double max_abs() const;
};

// Smallest n' >= n whose prime factors are in {2, 3, 5, 7}.
int fft_size_at_least(int n);

// Throws "aliasing" when M < 2N+1.
PhysicalGrid to_physical(const SpectralField& f, int M);
void to_physical(const SpectralField& f, int M, PhysicalGrid& out);
// Coefficients at |l| <= N of the trigonometric interpolant; throws "aliasing"
// when M < 2N+1.
SpectralField from_physical(const PhysicalGrid& g, int N);
void from_physical(const PhysicalGrid& g, SpectralField& out);

// Integral over the torus of Q(f(x)) with Q(x) = sum_j q[j] x^j, evaluated
// exactly on a grid with at least deg(Q)*N+1 points per axis.
double torus_integral_of_polynomial(const SpectralField& f, std::span<const double> q);
// Same, with a caller-chosen grid size (must satisfy the same bound).
double torus_integral_of_polynomial(const SpectralField& f, std::span<const double> q, int M);

// Grid mean of Q over an existing physical grid, times (2pi)^d.
double grid_integral_of_polynomial(const PhysicalGrid& g, std::span<const double> q);

}  // namespace wickstat
