#include "wickstat/ou.hpp"

#include <cmath>
#include <stdexcept>

namespace wickstat {

OuTables ou_tables(const ModelParams& p, const Lattice& lat) {
  OuTables t;
  t.lambda.resize(lat.size());
  t.variance.resize(lat.size());
  for (std::size_t i = 0; i < lat.size(); ++i) {
    t.lambda[i] = multiplier_weight(lat.point(i), p.sigma);
    t.variance[i] = stationary_mode_variance(p, lat.point(i));
  }
  return t;
}

void sample_stationary(const OuTables& t, SpectralField& out, RngStream& rng) {
  const std::size_t n = out.size();
  const std::size_t z = n / 2;
  const Lattice& lat = out.lattice();
  auto g0 = rng.gaussian_pair(lat.mode_key(z));
  out[z] = std::sqrt(t.variance[z]) * g0[0];
  for (std::size_t i = z + 1; i < n; ++i) {
    auto g = rng.gaussian_pair(lat.mode_key(i));
    const double s = std::sqrt(0.5 * t.variance[i]);
    const cplx v{s * g[0], s * g[1]};
    out[i] = v;
    out[n - 1 - i] = std::conj(v);
  }
  rng.advance();
}

SpectralField sample_stationary(const ModelParams& p, int N, RngStream& rng) {
  auto lat = make_lattice(p.d, N);
  SpectralField f(lat);
  sample_stationary(ou_tables(p, *lat), f, rng);
  return f;
}

void ou_coefficients(const OuTables& t, double dt, std::vector<double>& a, std::vector<double>& s) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const std::size_t n = t.lambda.size();
  const std::size_t z = n / 2;
  a.resize(n);
  s.resize(n);
  for (std::size_t i = z; i < n; ++i) {
    a[i] = std::exp(-dt * t.lambda[i]);
    const double share = i == z ? 1.0 : 0.5;
    s[i] = std::sqrt(-share * t.variance[i] * std::expm1(-2.0 * dt * t.lambda[i]));
    a[n - 1 - i] = a[i];
    s[n - 1 - i] = s[i];
  }
}

void ou_step_with(const std::vector<double>& a, const std::vector<double>& s, SpectralField& f, RngStream& rng) {
  const std::size_t n = f.size();
  const std::size_t z = n / 2;
  const Lattice& lat = f.lattice();
  {
    auto g = rng.gaussian_pair(lat.mode_key(z));
    f[z] = a[z] * f[z].real() + s[z] * g[0];
  }
  for (std::size_t i = z + 1; i < n; ++i) {
    auto g = rng.gaussian_pair(lat.mode_key(i));
    const cplx v = a[i] * f[i] + cplx{s[i] * g[0], s[i] * g[1]};
    f[i] = v;
    f[n - 1 - i] = std::conj(v);
  }
  rng.advance();
}

void ou_step_inplace(const OuTables& t, SpectralField& f, double dt, RngStream& rng) {
  std::vector<double> a, s;
  ou_coefficients(t, dt, a, s);
  ou_step_with(a, s, f, rng);
}

SpectralField ou_step(const ModelParams& p, const SpectralField& z, double dt, RngStream& rng) {
  SpectralField f = z;
  ou_step_inplace(ou_tables(p, z.lattice()), f, dt, rng);
  return f;
}

double covariance_oracle(const ModelParams& p, int N, int M, double t1, double t2, const std::array<double, 3>& x1,
                         const std::array<double, 3>& x2) {
  const int L = std::min(N, M);
  auto lat = make_lattice(p.d, L);
  const double tau = std::abs(t1 - t2);
  double s = 0.0;
  for (std::size_t i = 0; i < lat->size(); ++i) {
    const Point& l = lat->point(i);
    double phase = 0.0;
    for (int a = 0; a < p.d; ++a) phase += l[a] * (x1[a] - x2[a]);
    s += std::exp(-tau * multiplier_weight(l, p.sigma)) * stationary_mode_variance(p, l) * std::cos(phase);
  }
  return s * std::pow(kTwoPi, -p.d);
}

}  // namespace wickstat
