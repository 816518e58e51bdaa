#include "wickstat/renorm.hpp"

#include <cmath>

namespace wickstat {

std::string to_string(SingularCondition c) {
  switch (c) {
    case SingularCondition::Strict:
      return "strict";
    case SingularCondition::Borderline:
      return "borderline";
    case SingularCondition::Fails:
      return "fails";
  }
  return "?";
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::AbsolutelyContinuousExpected:
      return "AbsolutelyContinuousExpected";
    case Regime::SingularStrict:
      return "SingularStrict";
    case Regime::SingularBorderline:
      return "SingularBorderline";
    case Regime::AssumptionViolated:
      return "AssumptionViolated";
    case Regime::Supercritical:
      return "Supercritical";
  }
  return "?";
}

double ExponentReport::delta(double alpha) const {
  const auto& p = params;
  double s = p.n_at(0) + alpha - p.sigma;
  for (int i = 1; i <= p.k; ++i) s += 2.0 * p.m + p.n_at(i) + alpha + p.d - p.sigma;
  return s;
}

bool ExponentReport::w43_all() const {
  for (bool b : w43)
    if (!b) return false;
  return true;
}

double ExponentReport::regularity_Z() const { return 0.5 * (params.sigma - params.d) - params.m; }

double ExponentReport::regularity_Y() const { return A - params.n_at(0) + params.sigma; }

ExponentReport compute_exponents(const ModelParams& p) {
  p.validate();
  ExponentReport r;
  r.params = p;
  const double d = p.d, s = p.sigma, m = p.m, n0 = p.n_at(0);
  double A = 0.0;
  for (int i = 1; i <= p.k; ++i) {
    A += s - d - 2.0 * m - 2.0 * p.n_at(i);
    r.w43.push_back(0.5 * (s - d) - m - p.n_at(i) < 0.0);
  }
  r.A = 0.5 * A;
  r.alpha0 = 0.5 * (s - d) - m + (r.A + m - n0 + 0.5 * (s + d)) / (p.k + 1);
  // the exponents are sums of a few decimal inputs; exact ties can pick up
  // rounding in the last bits, so equality is tested with a few ulps of slack
  const double tol = 64.0 * 2.220446049250313e-16 * (std::abs(r.A) + s + d + std::abs(n0) + std::abs(m) + 1.0);
  r.subcritical_first = r.A + 0.5 * (d + s) > tol;
  r.subcritical_second = r.A + 0.5 * (d + s) - (n0 - m) > tol;
  r.singular_margin = (r.A + 0.5 * s) - (n0 - m);
  if (std::abs(r.singular_margin) <= tol)
    r.singular = SingularCondition::Borderline;
  else if (r.singular_margin < 0.0)
    r.singular = SingularCondition::Strict;
  else
    r.singular = SingularCondition::Fails;
  return r;
}

RegimeVerdict classify_regime(const ModelParams& p) {
  RegimeVerdict v{Regime::AbsolutelyContinuousExpected, compute_exponents(p)};
  const auto& r = v.report;
  if (!r.subcritical_second)
    v.regime = Regime::Supercritical;
  else if (r.singular == SingularCondition::Fails)
    v.regime = Regime::AbsolutelyContinuousExpected;
  else if (!r.w43_all() || !r.subcritical_first)
    v.regime = Regime::AssumptionViolated;
  else
    v.regime = r.singular == SingularCondition::Strict ? Regime::SingularStrict : Regime::SingularBorderline;
  return v;
}

}  // namespace wickstat
