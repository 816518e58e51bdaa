#pragma once

#include <span>
#include <vector>

namespace wickstat {

double mean(std::span<const double> x);
// Standard error of the mean (sample standard deviation / sqrt(n)).
double standard_error(std::span<const double> x);
// Linear interpolation between order statistics (type 7).
double quantile(std::vector<double> x, double p);
double median(std::vector<double> x);
double iqr(std::vector<double> x);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

// Mann-Kendall trend test with the tie-corrected variance and continuity
// correction. p_value is two sided.
struct MannKendall {
  double S = 0.0;
  double variance = 0.0;
  double z = 0.0;
  double p_value = 1.0;
  double tau = 0.0;
};
MannKendall mann_kendall(std::span<const double> series);

}  // namespace wickstat
