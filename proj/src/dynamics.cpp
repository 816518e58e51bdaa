#include "wickstat/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wickstat/config.hpp"
#include "wickstat/manifest.hpp"
#include "wickstat/parallel.hpp"
#include "wickstat/renorm.hpp"
#include "wickstat/rng.hpp"

namespace wickstat {

void SimConfig::validate() const {
  params.validate();
  if (N < 1) throw std::invalid_argument("N must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  if (!(grading > 0.0 && grading <= 1.0)) throw std::invalid_argument("grading must lie in (0, 1]");
  if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw std::invalid_argument("tail_tol must lie in (0, 1)");
  if (grid_N < 0) throw std::invalid_argument("grid_N must be nonnegative");
  if (dealias != 0 && dealias < 2) throw std::invalid_argument("dealias must be 0 or at least 2");
  if (!(blowup > 0.0)) throw std::invalid_argument("blowup threshold must be positive");
}

int SimConfig::grid_size() const {
  const int factor = dealias > 0 ? dealias : params.k + 1;
  return fft_size_at_least(std::max(factor * N + 1, 2 * N + 1));
}

double SimConfig::burn_in() const {
  if (T_burn >= 0.0) return T_burn;
  // slowest mode is l = 0 with rate 1
  return -std::log(tail_tol);
}

double SimConfig::rate_max() const {
  const Point top{std::max(N, grid_N), 0, 0};
  return (params.k + 1) * multiplier_weight(top, params.sigma);
}

std::vector<double> time_grid(const SimConfig& c) {
  c.validate();
  const double T = c.burn_in();
  const double total = T + c.t;
  const bool graded = c.params.coupling != 0.0;
  const double R = c.rate_max();
  const double h_min = c.grading / R;

  std::vector<double> back{c.t};
  double r = 0.0;
  while (r < total) {
    double h = c.dt;
    if (graded) {
      // e^{2r} overflows long before it matters
      const double var_rule = r < 300.0 ? std::exp(2.0 * r) / R : c.dt;
      h = std::clamp(std::min(c.grading * r, var_rule), h_min, c.dt);
    }
    r = std::min(r + h, total);
    // avoid a sliver at the far end
    if (total - r < 1e-3 * h) r = total;
    back.push_back(c.t - r);
  }
  std::reverse(back.begin(), back.end());
  back.front() = -T;

  auto it = std::lower_bound(back.begin(), back.end(), 0.0);
  if (it == back.end() || *it != 0.0) {
    // snap a near neighbour onto 0, otherwise split the step
    const std::size_t j = static_cast<std::size_t>(it - back.begin());
    const double hl = back[j] - back[j - 1];
    if (back[j] < 1e-3 * hl)
      back[j] = 0.0;
    else if (-back[j - 1] < 1e-3 * hl && j - 1 > 0)
      back[j - 1] = 0.0;
    else
      back.insert(it, 0.0);
  }
  return back;
}

double phi1(double z) {
  if (std::abs(z) < 1e-5) return 1.0 - z / 2.0 + z * z / 6.0;
  return -std::expm1(-z) / z;
}

double phi2(double z) {
  if (std::abs(z) < 0.2) {
    // sum_n (-z)^n / (n + 2)!
    double term = 0.5, s = 0.5;
    for (int n = 1; n < 20; ++n) {
      term *= -z / (n + 2);
      s += term;
    }
    return s;
  }
  return (z + std::expm1(-z)) / (z * z);
}

namespace {

std::string blowup_message(double time, double value) {
  std::ostringstream os;
  os << "blow-up at t = " << time << ": sup |u| = " << value;
  return os.str();
}

}  // namespace

BlowUpError::BlowUpError(double time, double value)
    : std::runtime_error(blowup_message(time, value)), time_(time), value_(value) {}

WickForcing::WickForcing(const ModelParams& p, int N, int grid) : p_(p), N_(N), M_(grid), k_(p.k) {
  p_.validate();
  if (M_ == 0) M_ = fft_size_at_least(std::max((k_ + 1) * N + 1, 2 * N + 1));
  if (M_ < 2 * N + 1) throw std::invalid_argument("aliasing: grid too small for the cutoff");
  equal_ = p_.equal_factor_multipliers();
  C_ = CovarianceMatrix(k_, factor_covariance(p_, N));
  auto lat = make_lattice(p_.d, N);
  const std::size_t n = lat->size();
  const int distinct = equal_ ? 1 : k_;
  factor_symbol_.resize(static_cast<std::size_t>(distinct) * n);
  identity_ = true;
  for (int j = 0; j < distinct; ++j) {
    const Multiplier mu = p_.N(j + 1);
    for (std::size_t i = 0; i < n; ++i) {
      const cplx s = mu(lat->point(i));
      factor_symbol_[static_cast<std::size_t>(j) * n + i] = s;
      if (s != cplx{1.0}) identity_ = false;
    }
  }
  outer_symbol_.resize(n);
  const Multiplier n0 = p_.N(0);
  for (std::size_t i = 0; i < n; ++i) outer_symbol_[i] = p_.coupling * n0(lat->point(i));
  if (equal_) hermite_ = hermite_coeffs(k_, C_(0, 0));
}

void WickForcing::factors(const SpectralField& f, Factors& out) const {
  if (f.cutoff() != N_) throw std::invalid_argument("field cutoff does not match the forcing");
  const std::size_t n = f.size();
  const int distinct = equal_ ? 1 : k_;
  out.grids.resize(static_cast<std::size_t>(distinct));
  SpectralField g = f;
  for (int j = 0; j < distinct; ++j) {
    const cplx* sym = factor_symbol_.data() + static_cast<std::size_t>(j) * n;
    for (std::size_t i = 0; i < n; ++i) g[i] = f[i] * sym[i];
    to_physical(g, M_, out.grids[static_cast<std::size_t>(j)]);
  }
}

void WickForcing::finish(PhysicalGrid& g, SpectralField& out) const {
  if (out.empty() || out.cutoff() != N_) out = SpectralField(make_lattice(p_.d, N_));
  from_physical(g, out);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= outer_symbol_[i];
}

void WickForcing::wick(const Factors& z, SpectralField& out) const {
  thread_local PhysicalGrid g;
  const PhysicalGrid& z0 = z.grids.front();
  g.d = z0.d;
  g.M = z0.M;
  g.values.resize(z0.values.size());
  if (equal_) {
    for (std::size_t x = 0; x < g.values.size(); ++x) {
      const double v = z0.values[x];
      double acc = hermite_.back();
      for (int j = k_ - 1; j >= 0; --j) acc = acc * v + hermite_[static_cast<std::size_t>(j)];
      g.values[x] = acc;
    }
  } else {
    std::vector<double> xs(static_cast<std::size_t>(k_));
    std::vector<double> w(std::size_t{1} << k_);
    for (std::size_t x = 0; x < g.values.size(); ++x) {
      for (int j = 0; j < k_; ++j) xs[static_cast<std::size_t>(j)] = z.grids[static_cast<std::size_t>(j)].values[x];
      wick_all_subsets(xs, C_, w);
      g.values[x] = w.back();
    }
  }
  finish(g, out);
}

void WickForcing::difference(const Factors& z, const Factors& w, SpectralField& out) const {
  thread_local PhysicalGrid g;
  const PhysicalGrid& z0 = z.grids.front();
  g.d = z0.d;
  g.M = z0.M;
  g.values.resize(z0.values.size());
  if (equal_) {
    // sum_{j >= 1} C(k, j) H_{k-j}(z) w^j
    const double c = C_(0, 0);
    std::vector<double> H(static_cast<std::size_t>(k_) + 1);
    std::vector<double> binom(static_cast<std::size_t>(k_) + 1, 1.0);
    for (int j = 1; j <= k_; ++j) binom[static_cast<std::size_t>(j)] = binom[static_cast<std::size_t>(j - 1)] * (k_ - j + 1) / j;
    const PhysicalGrid& w0 = w.grids.front();
    for (std::size_t x = 0; x < g.values.size(); ++x) {
      const double v = z0.values[x];
      H[0] = 1.0;
      if (k_ >= 1) H[1] = v;
      for (int j = 1; j < k_; ++j)
        H[static_cast<std::size_t>(j) + 1] = v * H[static_cast<std::size_t>(j)] - j * c * H[static_cast<std::size_t>(j) - 1];
      const double y = w0.values[x];
      double pw = 1.0, s = 0.0;
      for (int j = 1; j <= k_; ++j) {
        pw *= y;
        s += binom[static_cast<std::size_t>(j)] * H[static_cast<std::size_t>(k_ - j)] * pw;
      }
      g.values[x] = s;
    }
  } else {
    const std::size_t full = (std::size_t{1} << k_) - 1;
    std::vector<double> xs(static_cast<std::size_t>(k_)), ys(static_cast<std::size_t>(k_));
    std::vector<double> W(full + 1), P(full + 1);
    for (std::size_t x = 0; x < g.values.size(); ++x) {
      for (int j = 0; j < k_; ++j) {
        xs[static_cast<std::size_t>(j)] = z.grids[static_cast<std::size_t>(j)].values[x];
        ys[static_cast<std::size_t>(j)] = w.grids[static_cast<std::size_t>(j)].values[x];
      }
      wick_all_subsets(xs, C_, W);
      P[0] = 1.0;
      double s = 0.0;
      for (std::size_t S = 1; S <= full; ++S) {
        const int low = std::countr_zero(S);
        P[S] = P[S & (S - 1)] * ys[static_cast<std::size_t>(low)];
        s += W[full ^ S] * P[S];
      }
      g.values[x] = s;
    }
  }
  finish(g, out);
}

SpectralField wick_nonlinearity(const ModelParams& p, const SpectralField& Z, const std::vector<double>& C, int grid) {
  ModelParams q = p;
  q.coupling = 1.0;
  WickForcing wf(q, Z.cutoff(), grid);
  // caller-supplied covariance replaces the stationary one
  const CovarianceMatrix cov(p.k, C);
  WickForcing::Factors f;
  wf.factors(Z, f);
  thread_local PhysicalGrid g;
  const int k = p.k;
  g = f.grids.front();
  std::vector<double> xs(static_cast<std::size_t>(k));
  std::vector<double> w(std::size_t{1} << k);
  for (std::size_t x = 0; x < g.values.size(); ++x) {
    for (int j = 0; j < k; ++j)
      xs[static_cast<std::size_t>(j)] = f.grids[f.grids.size() == 1 ? 0 : static_cast<std::size_t>(j)].values[x];
    wick_all_subsets(xs, cov, w);
    g.values[x] = w.back();
  }
  SpectralField out(Z.lattice_ptr());
  from_physical(g, out);
  const Multiplier n0 = p.N(0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= n0(out.lattice().point(i));
  return out;
}

DuhamelIntegrator::DuhamelIntegrator(std::vector<double> lambda, SpectralField y0, SpectralField f0)
    : lambda_(std::move(lambda)), y_(std::move(y0)), f_(std::move(f0)) {
  if (lambda_.size() != y_.size() || f_.size() != y_.size()) throw std::invalid_argument("size mismatch");
}

void DuhamelIntegrator::step(double h, const SpectralField& f_next) {
  for (std::size_t i = 0; i < y_.size(); ++i) {
    const double z = h * lambda_[i];
    const double e = std::exp(-z);
    const double p1 = phi1(z), p2 = phi2(z);
    y_[i] = e * y_[i] + h * (p1 - p2) * f_[i] + h * p2 * f_next[i];
  }
  f_ = f_next;
}

void exponential_euler_step(SpectralField& v, const std::vector<double>& lambda, double h, const SpectralField& G) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double z = h * lambda[i];
    v[i] = std::exp(-z) * v[i] - h * phi1(z) * G[i];
  }
}

namespace {

// Per-step coefficient tables, recomputed only when the step size changes.
struct StepCoefficients {
  double h = -1.0;
  std::vector<double> ou_a, ou_s;   // exact OU transition
  std::vector<double> e, y0, y1;    // Y update weights on F_j and F_{j+1}
  std::vector<double> v1;           // h phi1 for the v update

  void update(const OuTables& t, double step) {
    if (step == h) return;
    h = step;
    ou_coefficients(t, h, ou_a, ou_s);
    const std::size_t n = t.lambda.size();
    e.resize(n);
    y0.resize(n);
    y1.resize(n);
    v1.resize(n);
    for (std::size_t i = n / 2; i < n; ++i) {
      const double z = h * t.lambda[i];
      const double p1 = phi1(z), p2 = phi2(z);
      e[i] = ou_a[i];
      y0[i] = h * (p1 - p2);
      y1[i] = h * p2;
      v1[i] = h * p1;
      const std::size_t m = n - 1 - i;
      e[m] = e[i];
      y0[m] = y0[i];
      y1[m] = y1[i];
      v1[m] = v1[i];
    }
  }
};

struct Shared {
  SimConfig c;
  std::vector<double> times;
  LatticePtr lat;
  OuTables tables;
  std::optional<WickForcing> forcing;  // absent when coupling = 0
};

Shared make_shared_state(const SimConfig& c) {
  c.validate();
  if (!c.params.simulable())
    throw std::invalid_argument("model is outside the simulable class (set wick_closable to override)");
  Shared s;
  s.c = c;
  s.times = time_grid(c);
  s.lat = make_lattice(c.params.d, c.N);
  s.tables = ou_tables(c.params, *s.lat);
  if (c.params.coupling != 0.0) s.forcing.emplace(c.params, c.N, c.grid_size());
  return s;
}

double sup_u(const Shared& s, const SpectralField& Z, const SpectralField& w, const WickForcing::Factors& fz,
             const WickForcing::Factors& fw) {
  if (s.forcing && s.forcing->identity_factors()) {
    const auto& a = fz.grids.front().values;
    const auto& b = fw.grids.front().values;
    double m = 0.0;
    for (std::size_t x = 0; x < a.size(); ++x) m = std::max(m, std::abs(a[x] + b[x]));
    return m;
  }
  return to_physical(Z + w, s.c.grid_size()).max_abs();
}

CoupledSample run_replica(const Shared& s, std::uint64_t replica) {
  const SimConfig& c = s.c;
  const std::size_t n = s.lat->size();
  RngStream rng(c.seed, replica, Purpose::Path);

  CoupledSample out;
  out.replica = replica;
  out.Z = SpectralField(s.lat);
  sample_stationary(s.tables, out.Z, rng);
  SpectralField& Z = out.Z;

  SpectralField Y(s.lat), F(s.lat), Fn(s.lat), v(s.lat), G(s.lat), w(s.lat);
  WickForcing::Factors fz, fw;
  const bool coupled = s.forcing.has_value();
  if (coupled) {
    s.forcing->factors(Z, fz);
    s.forcing->wick(fz, F);
  }

  StepCoefficients k;
  bool u_phase = false;
  const auto& T = s.times;
  for (std::size_t j = 0; j + 1 < T.size(); ++j) {
    const double h = T[j + 1] - T[j];
    k.update(s.tables, h);
    if (c.simulate_u && !u_phase && T[j] >= 0.0) {
      u_phase = true;
      v = Y;
      if (c.zero_start) v -= Z;
    }
    if (u_phase && coupled) {
      for (std::size_t i = 0; i < n; ++i) w[i] = v[i] - Y[i];
      s.forcing->factors(w, fw);
      s.forcing->difference(fz, fw, G);
      const double sup = sup_u(s, Z, w, fz, fw);
      if (!(sup <= c.blowup)) throw BlowUpError(T[j], sup);
    }

    ou_step_with(k.ou_a, k.ou_s, Z, rng);

    if (coupled) {
      s.forcing->factors(Z, fz);
      s.forcing->wick(fz, Fn);
      for (std::size_t i = 0; i < n; ++i) Y[i] = k.e[i] * Y[i] + k.y0[i] * F[i] + k.y1[i] * Fn[i];
      std::swap(F, Fn);
    }
    if (u_phase) {
      if (coupled)
        for (std::size_t i = 0; i < n; ++i) v[i] = k.e[i] * v[i] - k.v1[i] * G[i];
      else
        for (std::size_t i = 0; i < n; ++i) v[i] = k.e[i] * v[i];
    }
  }

  out.Y = Y;
  if (c.simulate_u) {
    SpectralField u = Z;
    u -= Y;
    u += v;
    if (coupled) {
      for (std::size_t i = 0; i < n; ++i) w[i] = v[i] - Y[i];
      s.forcing->factors(w, fw);
      const double sup = sup_u(s, Z, w, fz, fw);
      if (!(sup <= c.blowup)) throw BlowUpError(T.back(), sup);
    }
    out.u = std::move(u);
    out.v = std::move(v);
  }
  return out;
}

}  // namespace

CoupledSample simulate_replica(const SimConfig& c, std::uint64_t replica) {
  return run_replica(make_shared_state(c), replica);
}

std::vector<CoupledSample> simulate_ensemble(const SimConfig& c, int replicas, int workers) {
  if (replicas < 0) throw std::invalid_argument("negative replica count");
  const Shared s = make_shared_state(c);
  std::vector<CoupledSample> out(static_cast<std::size_t>(replicas));
  parallel_for(out.size(), workers, [&](std::size_t r) { out[r] = run_replica(s, r); });
  return out;
}

void write_ensemble_jsonl(std::ostream& os, const SimConfig& c, const std::vector<CoupledSample>& s,
                          const std::string& manifest_hash) {
  const std::string ph = params_hash(c.params);
  for (const auto& r : s) {
    nlohmann::ordered_json j;
    j["replica"] = r.replica;
    j["seed"] = c.seed;
    j["N"] = c.N;
    j["t"] = c.t;
    j["params_hash"] = ph;
    j["manifest_hash"] = manifest_hash;
    j["Z_l2"] = std::sqrt(l2_norm2(r.Z));
    j["Y_l2"] = std::sqrt(l2_norm2(r.Y));
    j["Z_mean"] = r.Z[r.Z.size() / 2].real();
    if (r.u) {
      j["u_l2"] = std::sqrt(l2_norm2(*r.u));
      j["v_l2"] = std::sqrt(l2_norm2(*r.v));
      j["u_mean"] = (*r.u)[r.u->size() / 2].real();
    }
    os << j.dump() << '\n';
  }
}

void write_field_csv(std::ostream& os, const SpectralField& f, const std::string& manifest_hash) {
  static const char* axes[] = {"l1", "l2", "l3"};
  for (int a = 0; a < f.dim(); ++a) os << axes[a] << ',';
  os << "re,im,manifest_hash\r\n";
  std::ostringstream line;
  line.precision(17);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Point& l = f.lattice().point(i);
    line.str("");
    for (int a = 0; a < f.dim(); ++a) line << l[a] << ',';
    line << f[i].real() << ',' << f[i].imag() << ',' << manifest_hash << "\r\n";
    os << line.str();
  }
}

std::string params_hash(const ModelParams& p) { return sha256_hex(to_json(p).dump()).substr(0, 16); }

}  // namespace wickstat
