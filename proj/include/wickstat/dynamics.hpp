#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wickstat/hermite.hpp"
#include "wickstat/model.hpp"
#include "wickstat/ou.hpp"
#include "wickstat/spectral.hpp"

namespace wickstat {

struct SimConfig {
  ModelParams params;
  int N = 64;
  double dt = 0.02;       // largest time step
  double T_burn = -1.0;   // negative: -log(tail_tol) / min <l>^sigma
  double t = 1.0;         // u runs on [0, t]; Z and Y on [-T_burn, t]
  int dealias = 0;        // grid >= dealias * N + 1 per axis; 0 means k + 1
  int grid_N = 0;         // cutoff the time grid is refined for; 0 means N
  std::uint64_t seed = 1;
  double grading = 0.02;  // step / lag ratio in the refined zone before t
  double blowup = 1e6;
  double tail_tol = 1e-10;
  bool simulate_u = true;
  bool zero_start = false;  // u(0) = 0 instead of u(0) = Z(0)

  void validate() const;
  int grid_size() const;
  double burn_in() const;
  // Fastest decorrelation rate of the forcing: (k+1) <max(N, grid_N)>^sigma.
  // Runs sharing grid_N share the time grid, hence the noise on common modes.
  double rate_max() const;
};

// Increasing times from -burn_in() to t, containing 0. Steps are dt far from
// t; at lag r before t they shrink to min(grading r, e^{2r} / rate_max()),
// never below grading / rate_max(). The first rule resolves the correlation
// of the forcing with the current state, the second keeps the quadrature
// variance of the fast modes of the forcing bounded over the memory of the
// slowest mode.
std::vector<double> time_grid(const SimConfig& c);

double phi1(double z);  // (1 - e^{-z}) / z
double phi2(double z);  // (z - 1 + e^{-z}) / z^2

class BlowUpError : public std::runtime_error {
public:
  BlowUpError(double time, double value);
  double time() const { return time_; }
  double value() const { return value_; }

private:
  double time_;
  double value_;
};

// Evaluates the renormalized nonlinearity and the Da Prato-Debussche remainder
// forcing on a dealiased grid. Shared read-only across replicas.
class WickForcing {
public:
  WickForcing(const ModelParams& p, int N, int grid);

  int cutoff() const { return N_; }
  int grid() const { return M_; }
  const CovarianceMatrix& covariance() const { return C_; }
  bool identity_factors() const { return identity_; }

  struct Factors {
    std::vector<PhysicalGrid> grids;  // one per distinct factor symbol
  };

  void factors(const SpectralField& f, Factors& out) const;
  // :F(z):, truncated to the cutoff
  void wick(const Factors& z, SpectralField& out) const;
  // :F(z + w): - :F(z): with w entering through plain products
  void difference(const Factors& z, const Factors& w, SpectralField& out) const;

private:
  void finish(PhysicalGrid& g, SpectralField& out) const;

  ModelParams p_;
  int N_, M_;
  int k_;
  bool equal_, identity_;
  CovarianceMatrix C_;
  std::vector<cplx> factor_symbol_;  // per distinct factor x lattice
  std::vector<cplx> outer_symbol_;   // coupling * N_0(l)
  std::vector<double> hermite_;      // H_k coefficients for the equal case
};

// :F(Z_N): with factor covariance C (row major, k x k), on a grid of the given
// size (0: smallest admissible).
SpectralField wick_nonlinearity(const ModelParams& p, const SpectralField& Z, const std::vector<double>& C,
                                int grid = 0);

// Exponential trapezoid rule for dY = (-lambda Y + F) ds with F linear in s
// between nodes; exact for piecewise linear forcing.
class DuhamelIntegrator {
public:
  DuhamelIntegrator(std::vector<double> lambda, SpectralField y0, SpectralField f0);
  void step(double h, const SpectralField& f_next);
  const SpectralField& value() const { return y_; }
  const SpectralField& forcing() const { return f_; }

private:
  std::vector<double> lambda_;
  SpectralField y_, f_;
};

struct CoupledSample {
  std::uint64_t replica = 0;
  SpectralField Z, Y;
  std::optional<SpectralField> u, v;
};

// One coupled (Z, Y, u) path for one replica.
CoupledSample simulate_replica(const SimConfig& c, std::uint64_t replica);
std::vector<CoupledSample> simulate_ensemble(const SimConfig& c, int replicas, int workers = 1);

// Exponential Euler for dv = (-lambda v - G) ds: v <- e^{-h lambda} v - h phi1(h lambda) G.
void exponential_euler_step(SpectralField& v, const std::vector<double>& lambda, double h, const SpectralField& G);

// Ensemble summaries: one JSON object per line.
void write_ensemble_jsonl(std::ostream& os, const SimConfig& c, const std::vector<CoupledSample>& s,
                          const std::string& manifest_hash);
// RFC 4180 CSV of (l_1..l_d, re, im, manifest_hash).
void write_field_csv(std::ostream& os, const SpectralField& f, const std::string& manifest_hash);

std::string params_hash(const ModelParams& p);

}  // namespace wickstat
