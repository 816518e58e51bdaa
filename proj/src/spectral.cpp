#include "wickstat/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fft.hpp"

namespace wickstat {

SpectralField::SpectralField(LatticePtr lat) : lat_(std::move(lat)), c_(lat_->size(), cplx{}) {}

SpectralField::SpectralField(LatticePtr lat, std::vector<cplx> coeffs)
    : lat_(std::move(lat)), c_(std::move(coeffs)) {
  if (c_.size() != lat_->size()) throw std::invalid_argument("coefficient count does not match lattice");
}

cplx SpectralField::at(const Point& l) const {
  auto i = lat_->find(l);
  return i < 0 ? cplx{} : c_[static_cast<std::size_t>(i)];
}

void SpectralField::set(const Point& l, cplx v) {
  auto i = lat_->find(l);
  if (i < 0) throw std::out_of_range("mode outside lattice");
  c_[static_cast<std::size_t>(i)] = v;
}

bool SpectralField::is_hermitian(double tol) const {
  const std::size_t n = c_.size();
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(c_[i] - std::conj(c_[n - 1 - i])) > tol) return false;
  return true;
}

void SpectralField::symmetrize() {
  const std::size_t n = c_.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    cplx a = 0.5 * (c_[i] + std::conj(c_[n - 1 - i]));
    c_[i] = a;
    c_[n - 1 - i] = std::conj(a);
  }
  c_[n / 2] = c_[n / 2].real();
}

static void check_same(const SpectralField& a, const SpectralField& b) {
  if (a.lattice_ptr() != b.lattice_ptr() &&
      (a.dim() != b.dim() || a.cutoff() != b.cutoff()))
    throw std::invalid_argument("fields live on different lattices");
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  check_same(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  check_same(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& v : c_) v *= s;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

SpectralField basis_mode(LatticePtr lat, const Point& l, cplx c) {
  SpectralField f(std::move(lat));
  f.set(l, c);
  return f;
}

SpectralField cosine_mode(LatticePtr lat, const Point& l, double amp) {
  // amp cos(l.x) = amp (2pi)^{d/2} (e_l + e_{-l}) / 2
  SpectralField f(lat);
  const double w = amp * std::pow(kTwoPi, 0.5 * lat->dim());
  Point m{-l[0], -l[1], -l[2]};
  if (norm2(l) == 0) {
    f.set(l, w);
  } else {
    f.set(l, 0.5 * w);
    f.set(m, 0.5 * w);
  }
  return f;
}

SpectralField apply_multiplier(const SpectralField& f, double alpha) {
  SpectralField g = f;
  if (alpha == 0.0) return g;
  const Lattice& lat = f.lattice();
  for (std::size_t i = 0; i < g.size(); ++i)
    g[i] *= std::pow(static_cast<double>(lat.norm2_at(i)) + 1.0, 0.5 * alpha);
  return g;
}

SpectralField apply_symbol(const SpectralField& f, const std::function<cplx(const Point&)>& symbol) {
  SpectralField g = f;
  const Lattice& lat = f.lattice();
  for (std::size_t i = 0; i < g.size(); ++i) g[i] *= symbol(lat.point(i));
  return g;
}

SpectralField project(const SpectralField& f, int N) {
  if (N > f.cutoff()) throw std::invalid_argument("cutoff exceeds source");
  if (N == f.cutoff()) return f;
  auto lat = make_lattice(f.dim(), N);
  SpectralField g(lat);
  const Lattice& src = f.lattice();
  for (std::size_t i = 0; i < g.size(); ++i)
    g[i] = f[static_cast<std::size_t>(src.find(lat->point(i)))];
  return g;
}

SpectralField extend(const SpectralField& f, int N) {
  if (N < f.cutoff()) throw std::invalid_argument("extension target smaller than source");
  if (N == f.cutoff()) return f;
  auto lat = make_lattice(f.dim(), N);
  SpectralField g(lat);
  const Lattice& src = f.lattice();
  for (std::size_t i = 0; i < f.size(); ++i)
    g[static_cast<std::size_t>(lat->find(src.point(i)))] = f[i];
  return g;
}

SpectralField resize(const SpectralField& f, int N) {
  return N <= f.cutoff() ? project(f, N) : extend(f, N);
}

double l2_norm2(const SpectralField& f) {
  double s = 0.0;
  for (const auto& v : f.coeffs()) s += std::norm(v);
  return s;
}

double PhysicalGrid::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

int fft_size_at_least(int n) {
  if (n < 1) return 1;
  for (int m = n;; ++m) {
    int r = m;
    for (int p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

namespace {

inline int wrap(int v, int M) { return v < 0 ? v + M : v; }

// Offset into the r2c half array of a lattice point whose last used
// coordinate is nonnegative.
inline std::size_t half_offset(const Point& l, int d, int M) {
  const std::size_t H = static_cast<std::size_t>(M / 2 + 1);
  switch (d) {
    case 1:
      return static_cast<std::size_t>(l[0]);
    case 2:
      return static_cast<std::size_t>(wrap(l[0], M)) * H + static_cast<std::size_t>(l[1]);
    default:
      return (static_cast<std::size_t>(wrap(l[0], M)) * M + static_cast<std::size_t>(wrap(l[1], M))) * H +
             static_cast<std::size_t>(l[2]);
  }
}

inline Point negate(const Point& l) { return {-l[0], -l[1], -l[2]}; }

}  // namespace

void to_physical(const SpectralField& f, int M, PhysicalGrid& out) {
  const int d = f.dim();
  const int N = f.cutoff();
  if (M < 2 * N + 1) throw std::invalid_argument("aliasing");
  auto& fft = detail::real_fft(d, M);
  cplx* spec = fft.spec();
  std::fill(spec, spec + fft.half_count(), cplx{});
  const Lattice& lat = f.lattice();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const Point& l = lat.point(i);
    if (l[d - 1] < 0) continue;
    spec[half_offset(l, d, M)] = f[i];
  }
  fft.backward();
  const double scale = std::pow(kTwoPi, -0.5 * d);
  out.d = d;
  out.M = M;
  out.values.resize(fft.real_count());
  const double* r = fft.real();
  for (std::size_t j = 0; j < fft.real_count(); ++j) out.values[j] = scale * r[j];
}

PhysicalGrid to_physical(const SpectralField& f, int M) {
  PhysicalGrid g;
  to_physical(f, M, g);
  return g;
}

void from_physical(const PhysicalGrid& g, SpectralField& out) {
  const int d = g.d;
  const int M = g.M;
  const int N = out.cutoff();
  if (out.dim() != d) throw std::invalid_argument("dimension mismatch");
  if (M < 2 * N + 1) throw std::invalid_argument("aliasing");
  auto& fft = detail::real_fft(d, M);
  if (g.values.size() != fft.real_count()) throw std::invalid_argument("grid size mismatch");
  std::copy(g.values.begin(), g.values.end(), fft.real());
  fft.forward();
  const cplx* spec = fft.spec();
  const double scale = std::pow(kTwoPi, 0.5 * d) / static_cast<double>(fft.real_count());
  const Lattice& lat = out.lattice();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const Point& l = lat.point(i);
    if (l[d - 1] >= 0)
      out[i] = scale * spec[half_offset(l, d, M)];
    else
      out[i] = scale * std::conj(spec[half_offset(negate(l), d, M)]);
  }
}

SpectralField from_physical(const PhysicalGrid& g, int N) {
  SpectralField f(make_lattice(g.d, N));
  from_physical(g, f);
  return f;
}

double grid_integral_of_polynomial(const PhysicalGrid& g, std::span<const double> q) {
  double s = 0.0;
  for (double x : g.values) {
    double acc = 0.0;
    for (std::size_t j = q.size(); j-- > 0;) acc = acc * x + q[j];
    s += acc;
  }
  return std::pow(kTwoPi, g.d) * s / static_cast<double>(g.values.size());
}

double torus_integral_of_polynomial(const SpectralField& f, std::span<const double> q, int M) {
  const int p = std::max<int>(1, static_cast<int>(q.size()) - 1);
  const int N = f.cutoff();
  if (M < p * N + 1 || M < 2 * N + 1) throw std::invalid_argument("aliasing");
  return grid_integral_of_polynomial(to_physical(f, M), q);
}

double torus_integral_of_polynomial(const SpectralField& f, std::span<const double> q) {
  const int p = std::max<int>(1, static_cast<int>(q.size()) - 1);
  const int N = f.cutoff();
  return torus_integral_of_polynomial(f, q, fft_size_at_least(std::max(p * N + 1, 2 * N + 1)));
}

}  // namespace wickstat
