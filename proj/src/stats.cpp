#include "wickstat/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace wickstat {

double mean(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("mean of an empty sample");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double standard_error(std::span<const double> x) {
  if (x.size() < 2) throw std::invalid_argument("standard error needs two samples");
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  const double n = static_cast<double>(x.size());
  return std::sqrt(s / (n - 1.0) / n);
}

double quantile(std::vector<double> x, double p) {
  if (x.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile level outside [0, 1]");
  std::sort(x.begin(), x.end());
  const double h = p * static_cast<double>(x.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (h - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

double median(std::vector<double> x) { return quantile(std::move(x), 0.5); }

double iqr(std::vector<double> x) { return quantile(x, 0.75) - quantile(x, 0.25); }

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear fit needs matching samples, n >= 2");
  const double mx = mean(x), my = mean(y);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("linear fit with constant abscissa");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0.0 ? 1.0 : sxy * sxy / (sxx * syy);
  return f;
}

MannKendall mann_kendall(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 3) throw std::invalid_argument("Mann-Kendall needs at least 3 points");
  MannKendall r;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) r.S += (x[j] > x[i]) - (x[j] < x[i]);
  std::map<double, int> ties;
  for (double v : x) ++ties[v];
  const double nn = static_cast<double>(n);
  double var = nn * (nn - 1.0) * (2.0 * nn + 5.0);
  for (const auto& [v, t] : ties) var -= t * (t - 1.0) * (2.0 * t + 5.0);
  r.variance = var / 18.0;
  if (r.variance > 0.0) {
    if (r.S > 0)
      r.z = (r.S - 1.0) / std::sqrt(r.variance);
    else if (r.S < 0)
      r.z = (r.S + 1.0) / std::sqrt(r.variance);
  }
  r.p_value = std::erfc(std::abs(r.z) / std::sqrt(2.0));
  r.tau = r.S / (0.5 * nn * (nn - 1.0));
  return r;
}

}  // namespace wickstat
