#include "wickstat/besov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wickstat/parallel.hpp"
#include "wickstat/rng.hpp"
#include "wickstat/stats.hpp"

namespace wickstat {

double dyadic_bump(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double a = std::exp(-1.0 / (2.0 - r));
  const double b = std::exp(-1.0 / (r - 1.0));
  return a / (a + b);
}

DyadicPartition::DyadicPartition(int d, int N) : d_(d), N_(N) {
  if (N < 0) throw std::invalid_argument("negative cutoff");
  last_ = -1;
  while (std::ldexp(1.0, last_ + 1) < N) ++last_;
  auto lat = make_lattice(d, N);
  const std::size_t n = lat->size();
  w_.assign(static_cast<std::size_t>(last_ + 2), std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::sqrt(static_cast<double>(lat->norm2_at(i)));
    w_[0][i] = dyadic_bump(r);
    for (int m = 0; m <= last_; ++m) {
      const double x = std::ldexp(r, -m);
      w_[static_cast<std::size_t>(m + 1)][i] = dyadic_bump(x / 2.0) - dyadic_bump(x);
    }
    double s = 0.0;
    for (auto& b : w_) s += b[i];
    for (auto& b : w_) b[i] /= s;
  }
}

int DyadicPartition::last_complete_block() const {
  int m = -1;
  while (m + 1 <= last_ && std::ldexp(1.0, m + 3) <= N_) ++m;
  return m;
}

const std::vector<double>& DyadicPartition::weights(int m) const {
  if (m < -1 || m > last_) throw std::out_of_range("Littlewood-Paley block out of range");
  return w_[static_cast<std::size_t>(m + 1)];
}

double DyadicPartition::weight(int m, std::size_t i) const { return weights(m)[i]; }

namespace {

int block_radius(int m, int N) { return std::min(N, m < 0 ? 2 : (4 << m)); }

// Delta_m f restricted to the smallest ball holding its support.
SpectralField block_field(const SpectralField& f, int m, const DyadicPartition& P) {
  const auto& w = P.weights(m);
  const int R = block_radius(m, f.cutoff());
  auto lat = make_lattice(f.dim(), R);
  SpectralField out(lat);
  const Lattice& src = f.lattice();
  for (std::size_t i = 0; i < lat->size(); ++i) {
    const long j = src.find(lat->point(i));
    out[i] = f[static_cast<std::size_t>(j)] * w[static_cast<std::size_t>(j)];
  }
  return out;
}

double lp_norm(const SpectralField& g, double p) {
  const int M = fft_size_at_least(4 * g.cutoff() + 1);
  const PhysicalGrid x = to_physical(g, M);
  if (std::isinf(p)) return x.max_abs();
  const double cell = std::pow(kTwoPi / M, g.dim());
  double s = 0.0;
  for (double v : x.values) s += std::pow(std::abs(v), p);
  return std::pow(s * cell, 1.0 / p);
}

void check_partition(const SpectralField& f, const DyadicPartition& P) {
  if (P.cutoff() != f.cutoff() || P.dim() != f.dim()) throw std::invalid_argument("partition does not match field");
}

}  // namespace

SpectralField lp_block(const SpectralField& f, int m, const DyadicPartition& P) {
  check_partition(f, P);
  const auto& w = P.weights(m);
  SpectralField out = f;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= w[i];
  return out;
}

double besov_norm(const SpectralField& f, double alpha, double p, double q) {
  return besov_norm(f, alpha, p, q, DyadicPartition(f.dim(), f.cutoff()));
}

double besov_norm(const SpectralField& f, double alpha, double p, double q, const DyadicPartition& P) {
  check_partition(f, P);
  if (!(p >= 1.0) || !(q >= 1.0)) throw std::invalid_argument("p and q must be at least 1");
  double acc = 0.0;
  for (int m = -1; m <= P.last_block(); ++m) {
    const double b = std::pow(2.0, alpha * std::max(m, 0)) * lp_norm(block_field(f, m, P), p);
    if (std::isinf(q))
      acc = std::max(acc, b);
    else
      acc += std::pow(b, q);
  }
  return std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
}

std::vector<double> block_sup_norms(const SpectralField& f, const DyadicPartition& P) {
  check_partition(f, P);
  std::vector<double> out;
  for (int m = -1; m <= P.last_block(); ++m) out.push_back(lp_norm(block_field(f, m, P), kInf));
  return out;
}

RegularityEstimate estimate_regularity(const std::vector<SpectralField>& samples, const RegularityOptions& o) {
  if (samples.empty() || static_cast<int>(samples.size()) < o.min_samples)
    throw std::invalid_argument("estimate_regularity needs at least " + std::to_string(o.min_samples) + " samples");
  const int d = samples.front().dim(), N = samples.front().cutoff();
  for (const auto& s : samples)
    if (s.dim() != d || s.cutoff() != N) throw std::invalid_argument("samples must share the lattice");
  DyadicPartition P(d, N);
  const int top = P.last_complete_block();
  const int count = std::min(o.blocks, top + 1);
  if (count < 4) throw std::invalid_argument("too few Littlewood-Paley blocks for a slope fit (need 4)");
  RegularityEstimate r;
  for (int m = top - count + 1; m <= top; ++m) r.blocks.push_back(m);

  const std::size_t S = samples.size();
  const std::size_t B = r.blocks.size();
  std::vector<double> norms(S * B);
  parallel_for(S, o.workers, [&](std::size_t s) {
    for (std::size_t b = 0; b < B; ++b) norms[s * B + b] = lp_norm(block_field(samples[s], r.blocks[b], P), kInf);
  });

  std::vector<double> xs(B);
  for (std::size_t b = 0; b < B; ++b) xs[b] = r.blocks[b] * std::log(2.0);
  auto fit = [&](const std::vector<std::size_t>& pick, std::vector<double>* means) {
    std::vector<double> ys(B, 0.0);
    for (std::size_t s : pick)
      for (std::size_t b = 0; b < B; ++b) ys[b] += norms[s * B + b];
    for (auto& y : ys) y /= static_cast<double>(pick.size());
    if (means) *means = ys;
    for (auto& y : ys) y = std::log(y);
    return linear_fit(xs, ys);
  };

  std::vector<std::size_t> all(S);
  for (std::size_t s = 0; s < S; ++s) all[s] = s;
  const LinearFit base = fit(all, &r.mean_sup);
  r.exponent = -base.slope;
  r.r2 = base.r2;
  r.samples = static_cast<int>(S);

  std::vector<double> boot;
  std::vector<std::size_t> pick(S);
  for (int b = 0; b < o.bootstrap; ++b) {
    RngStream rng(o.seed, static_cast<std::uint64_t>(b), Purpose::Bootstrap);
    for (std::size_t s = 0; s < S; s += 2) {
      const auto u = rng.uniform_pair(static_cast<std::uint32_t>(s / 2));
      pick[s] = std::min(S - 1, static_cast<std::size_t>(u[0] * static_cast<double>(S)));
      if (s + 1 < S) pick[s + 1] = std::min(S - 1, static_cast<std::size_t>(u[1] * static_cast<double>(S)));
    }
    boot.push_back(-fit(pick, nullptr).slope);
  }
  if (boot.empty()) {
    r.lower = r.upper = r.exponent;
  } else {
    r.lower = quantile(boot, 0.5 * (1.0 - o.level));
    r.upper = quantile(boot, 0.5 * (1.0 + o.level));
  }
  return r;
}

SpectralField synthetic_field(int d, int N, double alpha, int levels, double phase) {
  auto lat = make_lattice(d, N);
  SpectralField f(lat);
  const double norm = std::pow(kTwoPi, 0.5 * d) / 2.0;
  for (int j = 1; j <= levels; ++j) {
    const int q = 1 << j;
    if (q > N) throw std::invalid_argument("synthetic field level exceeds the cutoff");
    const cplx c = norm * std::pow(2.0, -alpha * j) * std::polar(1.0, q * phase);
    f.set(Point{q, 0, 0}, c);
    f.set(Point{-q, 0, 0}, std::conj(c));
  }
  return f;
}

std::vector<SpectralField> synthetic_ensemble(int d, int N, double alpha, int levels, int count, std::uint64_t seed) {
  std::vector<SpectralField> out;
  RngStream rng(seed, 0, Purpose::Synthetic);
  for (int i = 0; i < count; ++i) {
    const double u = rng.uniform_pair(static_cast<std::uint32_t>(i))[0];
    out.push_back(synthetic_field(d, N, alpha, levels, kTwoPi * u));
  }
  return out;
}

SmoothingReport smoothing_check(const SpectralField& f, double alpha, double gamma, const std::vector<int>& Ns) {
  if (gamma < 0.0) throw std::invalid_argument("gamma must be nonnegative");
  SmoothingReport r;
  const double base = besov_norm(f, alpha);
  if (base == 0.0) throw std::invalid_argument("zero field");
  for (int N : Ns) {
    if (N < 1 || N > f.cutoff()) throw std::invalid_argument("projection cutoff outside the field's range");
    const SpectralField g = std::pow(static_cast<double>(N), -gamma) * project(f, N);
    const double ratio = besov_norm(g, alpha + gamma) / base;
    r.Ns.push_back(N);
    r.ratios.push_back(ratio);
    r.max_ratio = std::max(r.max_ratio, ratio);
  }
  return r;
}

}  // namespace wickstat
