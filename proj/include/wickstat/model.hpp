#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wickstat/spectral.hpp"

namespace wickstat {

// Fourier symbol of a real translation-invariant operator.
struct Multiplier {
  enum class Kind { Bracket, Derivative, Constant };
  Kind kind = Kind::Bracket;
  double exponent = 0.0;  // Bracket: <l>^exponent
  int axis = 0;           // Derivative: i l_axis
  double value = 1.0;     // Constant

  static Multiplier bracket(double p) { return {Kind::Bracket, p, 0, 1.0}; }
  static Multiplier derivative(int axis) { return {Kind::Derivative, 0.0, axis, 1.0}; }
  static Multiplier constant(double c) { return {Kind::Constant, 0.0, 0, c}; }

  cplx operator()(const Point& l) const;

  // "bracket:<p>", "deriv[:<axis>]", "const:<c>"
  static Multiplier parse(const std::string& s);
  std::string str() const;
};

// One equation of the form
//   (d/dt + (1 - Lap)^{sigma/2}) u = -coupling * N0 prod_i N_i u + M xi
// with N_i = <grad>^{n_i} and M = <grad>^m unless overridden.
struct ModelParams {
  int d = 1;
  double sigma = 2.0;
  double m = 0.0;
  int k = 3;
  std::vector<double> n;  // n_0 .. n_k; missing entries are 0
  std::optional<std::vector<Multiplier>> N_table;  // N_0 .. N_k
  std::optional<Multiplier> M_table;
  double coupling = 1.0;
  std::optional<bool> wick_closable;

  double n_at(int i) const;
  Multiplier N(int i) const;
  Multiplier M() const;
  bool has_general_multipliers() const { return N_table.has_value() || M_table.has_value(); }
  // True when every N_i, i >= 1, is the same symbol.
  bool equal_factor_multipliers() const;

  void validate() const;
  // Default guard for the simulator: d = 1 fractional family with enough
  // smoothing for Wick ordering to close the equation, and d = 2, sigma = 2.
  bool simulable() const;
};

// |M(l)|^2 <l>^{-sigma}
double stationary_mode_variance(const ModelParams& p, const Point& l);

ModelParams phi4(int d, double sigma);
ModelParams kpz_multipliers();
ModelParams kpz_like();

}  // namespace wickstat
