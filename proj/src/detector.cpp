#include "wickstat/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "wickstat/config.hpp"
#include "wickstat/hermite.hpp"
#include "wickstat/ou.hpp"
#include "wickstat/parallel.hpp"
#include "wickstat/rng.hpp"

namespace wickstat {

std::string to_string(Normalization n) { return n == Normalization::Power ? "power" : "log"; }
std::string to_string(Law l) { return l == Law::Z ? "Z" : "u"; }

std::string to_string(ExperimentMode m) {
  switch (m) {
    case ExperimentMode::Coupled:
      return "coupled";
    case ExperimentMode::NullZ:
      return "null_z";
    case ExperimentMode::NullLinear:
      return "null_linear";
  }
  return "?";
}

double DetectorSpec::delta() const { return compute_exponents(params).delta(alpha); }

double DetectorSpec::normalize(double raw, int N) const {
  if (normalization == Normalization::Power) return raw * std::pow(static_cast<double>(N), -gamma);
  if (N < 2) throw std::invalid_argument("log normalization needs N >= 2");
  return raw * std::pow(std::log(static_cast<double>(N)), -gamma);
}

namespace {

struct Window {
  double lo, hi;
  std::string binding;  // which lower bound is active
};

Window gamma_window(const ModelParams& p, double alpha, double delta) {
  const double r = 0.5 * (p.sigma - p.d) - p.m;
  const double b1 = delta - 0.5 * p.d;
  const double b2 = -0.5 * p.d - (p.k + 1) * (r - alpha);
  Window w{0.0, delta, "gamma > 0"};
  if (b1 > w.lo) w = {b1, delta, "gamma > delta - d/2"};
  if (b2 > w.lo) w = {b2, delta, "gamma > -d/2 - (k+1)((sigma-d)/2 - m - alpha)"};
  return w;
}

}  // namespace

void DetectorSpec::validate() const {
  params.validate();
  const double dl = delta();
  if (normalization == Normalization::Power) {
    if (!(dl > 0.0)) throw std::invalid_argument("power normalization needs delta(alpha) > 0");
    const Window w = gamma_window(params, alpha, dl);
    if (!(gamma > w.lo && gamma < w.hi)) throw std::invalid_argument("gamma outside the admissible window");
  } else {
    if (std::abs(dl) > 1e-10) throw std::invalid_argument("log normalization needs delta(alpha) = 0");
    if (!(gamma > 0.5 && gamma < 1.0)) throw std::invalid_argument("log normalization needs gamma in (1/2, 1)");
  }
  if (Ns.empty()) throw std::invalid_argument("empty N grid");
}

double statistic(const SpectralField& phi, const DetectorSpec& s, const RenormConstants& c) {
  if (c.N > phi.cutoff()) throw std::invalid_argument("field not resolved at the requested cutoff");
  const SpectralField g = apply_multiplier(project(phi, c.N), s.alpha);
  const int k = s.params.k;
  const auto q = hermite_coeffs(k + 1, c.c1);
  const int M = fft_size_at_least(std::max((k + 1) * c.N + 1, 2 * c.N + 1));
  return torus_integral_of_polynomial(g, q, M) + std::pow(kTwoPi, s.params.d) * (k + 1) * c.c2;
}

DetectorSpec choose_spec(const ModelParams& p, const std::vector<int>& Ns, double epsilon) {
  const RegimeVerdict v = classify_regime(p);
  if (v.regime != Regime::SingularStrict && v.regime != Regime::SingularBorderline)
    throw DetectorInapplicable("detector inapplicable: regime is " + to_string(v.regime));
  DetectorSpec s;
  s.params = p;
  s.Ns = Ns;
  if (v.regime == Regime::SingularBorderline) {
    s.alpha = v.report.alpha0;
    s.normalization = Normalization::Log;
    s.gamma = 0.75;
    s.gamma_lo = 0.5;
    s.gamma_hi = 1.0;
    return s;
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  std::string last;
  for (int attempt = 0; attempt <= 10; ++attempt, epsilon *= 0.5) {
    const double alpha = v.report.alpha0 + epsilon;
    const double dl = v.report.delta(alpha);
    const Window w = gamma_window(p, alpha, dl);
    if (w.lo < w.hi) {
      s.alpha = alpha;
      s.epsilon = epsilon;
      s.normalization = Normalization::Power;
      s.gamma_lo = w.lo;
      s.gamma_hi = w.hi;
      s.gamma = 0.5 * (w.lo + w.hi);
      return s;
    }
    last = w.binding;
  }
  throw std::invalid_argument("empty gamma window: violated constraint " + last);
}

namespace {

LawSummary summarize(const std::vector<std::vector<double>>& by_N) {
  LawSummary s;
  for (const auto& v : by_N) {
    std::vector<double> a(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) a[i] = std::abs(v[i]);
    s.median.push_back(median(v));
    s.iqr.push_back(iqr(v));
    s.median_abs.push_back(median(a));
    s.iqr_abs.push_back(iqr(a));
  }
  s.strictly_increasing = s.strictly_decreasing = s.median_abs.size() >= 2;
  for (std::size_t i = 1; i < s.median_abs.size(); ++i) {
    if (!(s.median_abs[i] > s.median_abs[i - 1])) s.strictly_increasing = false;
    if (!(s.median_abs[i] < s.median_abs[i - 1])) s.strictly_decreasing = false;
  }
  if (s.median_abs.size() >= 3) s.trend = mann_kendall(s.median_abs);
  return s;
}

}  // namespace

SeparationReport run_experiment(const DetectorSpec& spec, const std::vector<RenormConstants>& constants,
                                const std::vector<StatisticTrace>& traces, double min_separation) {
  SeparationReport r;
  r.spec = spec;
  r.constants = constants;
  r.min_separation = min_separation;
  const std::size_t n = spec.Ns.size();
  std::vector<std::vector<double>> z(n), u(n);
  for (const auto& t : traces) {
    auto it = std::find(spec.Ns.begin(), spec.Ns.end(), t.N);
    if (it == spec.Ns.end()) throw std::invalid_argument("trace at a cutoff outside the grid");
    (t.law == Law::Z ? z : u)[static_cast<std::size_t>(it - spec.Ns.begin())].push_back(t.normalized);
  }
  for (std::size_t i = 0; i < n; ++i)
    if (z[i].empty() || u[i].empty()) throw std::invalid_argument("both ensembles are needed at every N");
  r.replicas = static_cast<int>(z.back().size());
  r.z = summarize(z);
  r.u = summarize(u);
  const double den = r.u.median_abs.back();
  r.separation = den > 0.0 ? r.z.median_abs.back() / den : std::numeric_limits<double>::infinity();
  // below five points the Mann-Kendall test cannot reach p < 0.05
  const bool z_grows = n < 5 ? r.z.strictly_increasing : (r.z.trend.z > 0.0 && r.z.trend.p_value < 0.05);
  r.achieved = r.separation >= min_separation && z_grows;
  return r;
}

std::vector<RenormConstants> detector_constants(const DetectorSpec& spec, int workers) {
  std::vector<RenormConstants> out;
  for (int N : spec.Ns) out.push_back(renorm_constants(spec.params, N, spec.alpha, workers));
  return out;
}

std::vector<StatisticTrace> sample_traces(const DetectorSpec& spec, const std::vector<RenormConstants>& constants,
                                          const ExperimentConfig& e) {
  if (e.replicas < 1) throw std::invalid_argument("need at least one replica");
  if (constants.size() != spec.Ns.size()) throw std::invalid_argument("one set of constants per N");
  const std::size_t R = static_cast<std::size_t>(e.replicas);
  const std::size_t n = spec.Ns.size();
  const int Nmax = *std::max_element(spec.Ns.begin(), spec.Ns.end());
  const std::uint64_t seed = e.sim.seed;
  std::vector<StatisticTrace> out(2 * n * R);
  auto put = [&](Law law, std::size_t ni, std::size_t r, double raw) {
    StatisticTrace& t = out[(law == Law::Z ? 0 : n * R) + ni * R + r];
    t.law = law;
    t.N = spec.Ns[ni];
    t.replica = r;
    t.raw = raw;
    t.normalized = spec.normalize(raw, t.N);
  };

  const OuTables tables = ou_tables(spec.params, *make_lattice(spec.params.d, Nmax));
  // Draws are keyed by wavevector, so P_N of one stationary sample at Nmax is
  // the stationary sample at N.
  auto stationary = [&](std::uint64_t r, Purpose purpose) {
    SpectralField f(make_lattice(spec.params.d, Nmax));
    RngStream rng(seed, r, purpose);
    sample_stationary(tables, f, rng);
    return f;
  };
  parallel_for(R, e.workers, [&](std::size_t r) {
    const SpectralField f = stationary(r, Purpose::ZLaw);
    for (std::size_t ni = 0; ni < n; ++ni) put(Law::Z, ni, r, statistic(f, spec, constants[ni]));
  });

  switch (e.mode) {
    case ExperimentMode::NullZ:
      parallel_for(R, e.workers, [&](std::size_t r) {
        const SpectralField f = stationary(r, Purpose::Path);
        for (std::size_t ni = 0; ni < n; ++ni) put(Law::U, ni, r, statistic(f, spec, constants[ni]));
      });
      break;
    case ExperimentMode::NullLinear: {
      // Without the nonlinearity u is the OU path itself, and with keyed draws
      // on a shared uniform time grid its projection to N is the run at N.
      SimConfig c = e.sim;
      c.params = spec.params;
      c.params.coupling = 0.0;
      c.N = Nmax;
      c.grid_N = Nmax;
      const auto runs = simulate_ensemble(c, e.replicas, e.workers);
      parallel_for(R, e.workers, [&](std::size_t r) {
        for (std::size_t ni = 0; ni < n; ++ni) put(Law::U, ni, r, statistic(*runs[r].u, spec, constants[ni]));
      });
      break;
    }
    case ExperimentMode::Coupled:
      for (std::size_t ni = 0; ni < n; ++ni) {
        SimConfig c = e.sim;
        c.params = spec.params;
        c.N = spec.Ns[ni];
        c.grid_N = Nmax;
        c.simulate_u = true;
        const auto runs = simulate_ensemble(c, e.replicas, e.workers);
        parallel_for(R, e.workers, [&](std::size_t r) { put(Law::U, ni, r, statistic(*runs[r].u, spec, constants[ni])); });
      }
      break;
  }
  return out;
}

SeparationReport detect(const DetectorSpec& spec, const ExperimentConfig& e, std::vector<StatisticTrace>* traces) {
  spec.validate();
  const auto constants = detector_constants(spec, e.workers);
  auto t = sample_traces(spec, constants, e);
  SeparationReport r = run_experiment(spec, constants, t, e.min_separation);
  r.mode = e.mode;
  if (traces) *traces = std::move(t);
  return r;
}

nlohmann::ordered_json to_json(const DetectorSpec& s) {
  nlohmann::ordered_json j;
  j["params"] = to_json(s.params);
  j["alpha"] = s.alpha;
  j["epsilon"] = s.epsilon;
  j["gamma"] = s.gamma;
  j["gamma_window"] = {s.gamma_lo, s.gamma_hi};
  j["normalization"] = to_string(s.normalization);
  j["delta"] = s.delta();
  j["Ns"] = s.Ns;
  return j;
}

namespace {

nlohmann::ordered_json law_json(const LawSummary& s) {
  nlohmann::ordered_json j;
  j["median"] = s.median;
  j["iqr"] = s.iqr;
  j["median_abs"] = s.median_abs;
  j["iqr_abs"] = s.iqr_abs;
  j["strictly_increasing"] = s.strictly_increasing;
  j["strictly_decreasing"] = s.strictly_decreasing;
  j["mann_kendall"] = {{"S", s.trend.S}, {"z", s.trend.z}, {"p_value", s.trend.p_value}, {"tau", s.trend.tau}};
  return j;
}

}  // namespace

nlohmann::ordered_json to_json(const SeparationReport& r) {
  nlohmann::ordered_json j;
  j["spec"] = to_json(r.spec);
  j["mode"] = to_string(r.mode);
  j["replicas"] = r.replicas;
  nlohmann::ordered_json cs = nlohmann::ordered_json::array();
  for (const auto& c : r.constants)
    cs.push_back({{"N", c.N}, {"c1", c.c1}, {"c2", c.c2}, {"method", to_string(c.method)}});
  j["constants"] = cs;
  j["z_law"] = law_json(r.z);
  j["u_law"] = law_json(r.u);
  j["separation"] = r.separation;
  j["min_separation"] = r.min_separation;
  j["achieved"] = r.achieved;
  return j;
}

void write_traces_csv(std::ostream& os, const std::vector<StatisticTrace>& t, const std::string& manifest_hash) {
  os << "law,N,replica,raw,normalized,manifest_hash\r\n";
  std::ostringstream line;
  line.precision(17);
  for (const auto& x : t) {
    line.str("");
    line << to_string(x.law) << ',' << x.N << ',' << x.replica << ',' << x.raw << ',' << x.normalized << ','
         << manifest_hash << "\r\n";
    os << line.str();
  }
}

}  // namespace wickstat
