#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "wickstat/spectral.hpp"

namespace wickstat {

// Smooth dyadic partition of unity on the lattice of cutoff N: chi(l) =
// psi(|l|), rho(l) = psi(|l|/2) - psi(|l|) with psi = 1 on [0, 1], 0 on
// [2, inf) and an e^{-1/x} transition, and rho_j = rho(2^{-j} .). Weights are
// normalized so that they sum to 1 at every lattice point.
class DyadicPartition {
public:
  DyadicPartition(int d, int N);

  int dim() const { return d_; }
  int cutoff() const { return N_; }
  // Blocks -1..last_block() cover the lattice.
  int last_block() const { return last_; }
  // Largest m whose support 2^m <= |l| <= 2^{m+2} fits inside the lattice.
  int last_complete_block() const;
  // Weight of block m at lattice index i.
  double weight(int m, std::size_t i) const;
  const std::vector<double>& weights(int m) const;

private:
  int d_, N_, last_;
  std::vector<std::vector<double>> w_;  // w_[m + 1][i]
};

double dyadic_bump(double r);  // psi

// Delta_m f. Throws for m outside [-1, last_block()].
SpectralField lp_block(const SpectralField& f, int m, const DyadicPartition& P);

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// || 2^{alpha max(m,0)} ||Delta_m f||_{L^p} ||_{l^q}. Block m is sampled on a
// grid twice as fine as the Nyquist grid of its support.
double besov_norm(const SpectralField& f, double alpha, double p = kInf, double q = kInf);
double besov_norm(const SpectralField& f, double alpha, double p, double q, const DyadicPartition& P);

// sup norm of Delta_m f for every block -1..last_block()
std::vector<double> block_sup_norms(const SpectralField& f, const DyadicPartition& P);

struct RegularityOptions {
  int blocks = 5;           // top complete blocks used in the fit
  int bootstrap = 200;
  double level = 0.90;
  std::uint64_t seed = 1;   // bootstrap resampling stream
  int min_samples = 100;
  int workers = 1;
};

struct RegularityEstimate {
  double exponent = 0.0;  // -slope
  double lower = 0.0, upper = 0.0;
  std::vector<int> blocks;
  std::vector<double> mean_sup;  // E ||Delta_m f||_inf per fitted block
  double r2 = 0.0;
  int samples = 0;
};

// Fits log E ||Delta_m f||_inf against m log 2 over the top complete blocks.
// Throws with fewer than 4 usable blocks or too few samples.
RegularityEstimate estimate_regularity(const std::vector<SpectralField>& samples, const RegularityOptions& o = {});

// sum_{j=1}^{levels} 2^{-alpha j} cos(2^j x_1), shifted by the given phase.
SpectralField synthetic_field(int d, int N, double alpha, int levels, double phase = 0.0);
// 'count' random translates of synthetic_field.
std::vector<SpectralField> synthetic_ensemble(int d, int N, double alpha, int levels, int count, std::uint64_t seed);

struct SmoothingReport {
  std::vector<int> Ns;
  std::vector<double> ratios;  // ||N^{-gamma} P_N f||_{C^{alpha+gamma}} / ||f||_{C^alpha}
  double max_ratio = 0.0;
};

SmoothingReport smoothing_check(const SpectralField& f, double alpha, double gamma, const std::vector<int>& Ns);

}  // namespace wickstat
