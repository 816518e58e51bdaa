#include "wickstat/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wickstat {

cplx Multiplier::operator()(const Point& l) const {
  switch (kind) {
    case Kind::Bracket:
      return multiplier_weight(l, exponent);
    case Kind::Derivative:
      return {0.0, static_cast<double>(l[axis])};
    case Kind::Constant:
      return value;
  }
  return 0.0;
}

Multiplier Multiplier::parse(const std::string& s) {
  auto colon = s.find(':');
  std::string head = s.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : s.substr(colon + 1);
  try {
    if (head == "bracket") return bracket(std::stod(arg));
    if (head == "deriv") return derivative(arg.empty() ? 0 : std::stoi(arg));
    if (head == "const") return constant(std::stod(arg));
  } catch (const std::logic_error&) {
  }
  throw std::invalid_argument("cannot parse multiplier '" + s + "'");
}

std::string Multiplier::str() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::Bracket:
      os << "bracket:" << exponent;
      break;
    case Kind::Derivative:
      os << "deriv:" << axis;
      break;
    case Kind::Constant:
      os << "const:" << value;
      break;
  }
  return os.str();
}

double ModelParams::n_at(int i) const {
  return i < static_cast<int>(n.size()) ? n[static_cast<std::size_t>(i)] : 0.0;
}

Multiplier ModelParams::N(int i) const {
  if (N_table) return N_table->at(static_cast<std::size_t>(i));
  return Multiplier::bracket(n_at(i));
}

Multiplier ModelParams::M() const { return M_table ? *M_table : Multiplier::bracket(m); }

bool ModelParams::equal_factor_multipliers() const {
  for (int i = 2; i <= k; ++i) {
    Multiplier a = N(1), b = N(i);
    if (a.kind != b.kind || a.exponent != b.exponent || a.axis != b.axis || a.value != b.value) return false;
  }
  return true;
}

void ModelParams::validate() const {
  if (d < 1 || d > 3) throw std::invalid_argument("d must be 1, 2 or 3");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be a finite nonnegative number");
  if (k < 1) throw std::invalid_argument("k must be positive");
  if (static_cast<int>(n.size()) > k + 1) throw std::invalid_argument("more exponents n_i than k+1");
  if (N_table && static_cast<int>(N_table->size()) != k + 1)
    throw std::invalid_argument("multiplier table must list N_0..N_k");
  auto check_axis = [&](const Multiplier& mu) {
    if (mu.kind == Multiplier::Kind::Derivative && (mu.axis < 0 || mu.axis >= d))
      throw std::invalid_argument("derivative axis out of range");
  };
  if (N_table)
    for (const auto& mu : *N_table) check_axis(mu);
  if (M_table) check_axis(*M_table);
}

bool ModelParams::simulable() const {
  if (wick_closable) return *wick_closable;
  if (has_general_multipliers() || coupling < 0.0) return false;
  if (d == 2) return sigma == 2.0 && m == 0.0;
  if (d != 1) return false;
  double nmax = 0.0;
  for (int i = 1; i <= k; ++i) nmax = std::max(nmax, n_at(i));
  if (n_at(0) != 0.0 || nmax != 0.0) return false;
  // worst product in the remainder equation: Y against the (k-1)th Wick power
  const double r = 0.5 * (sigma - d) - m;
  return r >= 0.0 || (2 * k - 1) * r + sigma > 0.0;
}

double stationary_mode_variance(const ModelParams& p, const Point& l) {
  const double w = p.M_table ? std::norm((*p.M_table)(l)) : multiplier_weight(l, 2.0 * p.m);
  return w * multiplier_weight(l, -p.sigma);
}

ModelParams phi4(int d, double sigma) {
  ModelParams p;
  p.d = d;
  p.sigma = sigma;
  p.k = 3;
  p.n.assign(4, 0.0);
  return p;
}

ModelParams kpz_multipliers() {
  ModelParams p;
  p.d = 1;
  p.sigma = 2.0;
  p.k = 2;
  p.n = {0.0, 1.0, 1.0};
  p.N_table = std::vector<Multiplier>{Multiplier::constant(-1.0), Multiplier::derivative(0), Multiplier::derivative(0)};
  p.M_table = Multiplier::constant(1.0);
  return p;
}

ModelParams kpz_like() {
  ModelParams p;
  p.d = 1;
  p.sigma = 2.0;
  p.k = 2;
  p.n = {0.0, 1.0, 1.0};
  return p;
}

}  // namespace wickstat
