#pragma once

#include <array>
#include <vector>

#include "wickstat/model.hpp"
#include "wickstat/rng.hpp"

namespace wickstat {

// Per-lattice-point tables used by the samplers.
struct OuTables {
  std::vector<double> lambda;    // <l>^sigma
  std::vector<double> variance;  // stationary mode variance
};
OuTables ou_tables(const ModelParams& p, const Lattice& lat);

// Draws from the current block of rng and advances it.
SpectralField sample_stationary(const ModelParams& p, int N, RngStream& rng);
void sample_stationary(const OuTables& t, SpectralField& out, RngStream& rng);

// Transition coefficients for one step: a = e^{-dt lambda} and the noise
// scale per real component (the zero mode carries its full variance).
void ou_coefficients(const OuTables& t, double dt, std::vector<double>& a, std::vector<double>& s);
void ou_step_with(const std::vector<double>& a, const std::vector<double>& s, SpectralField& z, RngStream& rng);

// Exact transition over time dt > 0; consumes one block of rng.
SpectralField ou_step(const ModelParams& p, const SpectralField& z, double dt, RngStream& rng);
void ou_step_inplace(const OuTables& t, SpectralField& z, double dt, RngStream& rng);

// E[Z_N(t1, x1) Z_M(t2, x2)]
double covariance_oracle(const ModelParams& p, int N, int M, double t1, double t2, const std::array<double, 3>& x1,
                         const std::array<double, 3>& x2);

}  // namespace wickstat
