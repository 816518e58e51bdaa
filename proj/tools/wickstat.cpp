#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wickstat/besov.hpp"
#include "wickstat/config.hpp"
#include "wickstat/detector.hpp"
#include "wickstat/dynamics.hpp"
#include "wickstat/manifest.hpp"
#include "wickstat/ou.hpp"
#include "wickstat/parallel.hpp"
#include "wickstat/renorm.hpp"
#include "wickstat/rng.hpp"

namespace fs = std::filesystem;
using namespace wickstat;
using json = nlohmann::ordered_json;

namespace {

struct Common {
  std::string config_file;
  std::string preset_name;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  int workers = 0;
  std::string out;
  std::optional<int> d, k;
  std::optional<double> sigma, m;
  bool timing = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_file, "key = value configuration file");
  app->add_option("--preset", c.preset_name, "built-in configuration: phi4_2, phi4_3, frac_phi4, kpz, kpz_like");
  app->add_option("--set", c.sets, "override, key=value (repeatable)");
  app->add_option("--seed", c.seed, "master seed");
  app->add_option("--workers", c.workers, "worker threads (default: WICKSTAT_WORKERS, then all cores)");
  app->add_option("--out", c.out, "output directory");
  app->add_option("--d", c.d, "dimension");
  app->add_option("--sigma", c.sigma, "dissipation order");
  app->add_option("--k", c.k, "degree of the nonlinearity");
  app->add_option("--m", c.m, "noise regularity shift");
  app->add_flag("--timing", c.timing, "record wall-clock runtimes (outputs are then not reproducible)");
}

struct Loaded {
  ConfigMap cfg;
  std::string input_hash;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

Loaded load(const Common& c) {
  Loaded l;
  if (!c.preset_name.empty()) l.cfg = preset(c.preset_name);
  if (!c.config_file.empty()) {
    std::ifstream in(c.config_file, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open config file " + c.config_file);
    std::ostringstream os;
    os << in.rdbuf();
    l.input_hash = sha256_hex(os.str());
    const ConfigMap file = ConfigMap::parse(os.str());
    for (const auto& [k, v] : file.entries()) l.cfg.set(k, v);
  }
  if (c.d) l.cfg.set("d", std::to_string(*c.d));
  if (c.k) l.cfg.set("k", std::to_string(*c.k));
  if (c.sigma) l.cfg.set("sigma", fmt(*c.sigma));
  if (c.m) l.cfg.set("m", fmt(*c.m));
  for (const auto& s : c.sets) l.cfg.apply_override(s);
  if (c.seed) l.cfg.set("seed", std::to_string(*c.seed));
  // with a new k and no explicit exponents, default to zeros of the new length
  if (l.cfg.has("n") && static_cast<int>(l.cfg.get_doubles("n").size()) != l.cfg.get_int("k", 3) + 1 &&
      !l.cfg.has("N_table") && c.k)
    l.cfg.erase("n");
  return l;
}

class Outputs {
public:
  Outputs(const Common& c, const std::string& command, const Loaded& l) : dir_(c.out) {
    m_.command = command;
    m_.config = l.cfg.to_json();
    m_.seed = l.cfg.get_u64("seed", 1);
    m_.version = code_version();
    m_.input_hash = l.input_hash;
    m_.started_utc = utc_now();
    if (!dir_.empty()) fs::create_directories(dir_);
  }
  bool enabled() const { return !dir_.empty(); }
  std::string hash() const { return m_.hash(); }

  void write(const std::string& name, const std::string& content) {
    if (!enabled()) return;
    std::ofstream f(fs::path(dir_) / name, std::ios::binary);
    f << content;
    if (!f) throw std::runtime_error("cannot write " + name);
    m_.outputs.push_back(name);
  }
  void write_json(const std::string& name, json j) {
    j["manifest_hash"] = hash();
    write(name, j.dump(2) + "\n");
  }
  void finish() {
    if (!enabled()) return;
    m_.finished_utc = utc_now();
    std::ofstream f(fs::path(dir_) / "manifest.json", std::ios::binary);
    f << m_.to_json().dump(2) << "\n";
  }

private:
  std::string dir_;
  RunManifest m_;
};

json verdict_json(const RegimeVerdict& v) {
  const auto& r = v.report;
  json j;
  j["regime"] = to_string(v.regime);
  j["params"] = to_json(r.params);
  j["A"] = r.A;
  j["alpha0"] = r.alpha0;
  j["w43"] = r.w43;
  j["subcritical_first"] = r.subcritical_first;
  j["subcritical_second"] = r.subcritical_second;
  j["singular_margin"] = r.singular_margin;
  j["singular"] = to_string(r.singular);
  j["regularity_Z"] = r.regularity_Z();
  j["regularity_Y"] = r.regularity_Y();
  return j;
}

int cmd_classify(const Common& c) {
  const Loaded l = load(c);
  const ModelParams p = model_from(l.cfg);
  Outputs out(c, "classify", l);
  const RegimeVerdict v = classify_regime(p);
  std::cout << to_string(v.regime) << "\n";
  out.write_json("classify.json", verdict_json(v));
  out.finish();
  return 0;
}

int cmd_constants(const Common& c, bool cross_check_flag) {
  const Loaded l = load(c);
  const ModelParams p = model_from(l.cfg);
  const int workers = resolve_workers(c.workers);
  Outputs out(c, "constants", l);
  const ExponentReport rep = compute_exponents(p);
  const double alpha = l.cfg.get_double("alpha", rep.alpha0);
  std::vector<int> Ns = l.cfg.get_ints("Ns");
  if (Ns.empty()) Ns = {8, 16, 32, 64};
  const std::string method = l.cfg.get_string("method", "auto");
  if (method != "auto" && method != "brute" && method != "fast")
    throw std::invalid_argument("method must be auto, brute or fast");
  const bool cross = cross_check_flag || l.cfg.get_bool("cross_check", false);
  QuadratureSpec q;
  q.rel_tol = l.cfg.get_double("rel_tol", q.rel_tol);

  std::ostringstream csv;
  csv.precision(17);
  csv << "N,c1,c2,method,runtime_ms,manifest_hash\r\n";
  std::vector<double> c2s;
  double max_rel = 0.0;
  bool crossed = false;
  for (int N : Ns) {
    const auto t0 = std::chrono::steady_clock::now();
    RenormConstants r;
    if (method == "auto") {
      r = renorm_constants(p, N, alpha, workers);
    } else {
      r.N = N;
      r.alpha = alpha;
      r.c1 = c1(p, N, alpha);
      r.method = method == "brute" ? RenormConstants::Method::Brute : RenormConstants::Method::Fast;
      r.c2 = method == "brute" ? c2_brute(p, N, alpha, workers) : c2_fast(p, N, alpha, q);
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (cross) {
      const double other = r.method == RenormConstants::Method::Brute ? c2_fast(p, N, alpha, q) : c2_brute(p, N, alpha, workers);
      const double scale = std::max(std::abs(r.c2), std::abs(other));
      if (scale > 0.0) max_rel = std::max(max_rel, std::abs(r.c2 - other) / scale);
      crossed = true;
    }
    c2s.push_back(r.c2);
    csv << N << ',' << r.c1 << ',' << r.c2 << ',' << to_string(r.method) << ',';
    if (c.timing) csv << ms;
    csv << ',' << out.hash() << "\r\n";
    std::cout << "N=" << N << " c1=" << fmt(r.c1) << " c2=" << fmt(r.c2) << " (" << to_string(r.method) << ")\n";
  }

  json j;
  j["params"] = to_json(p);
  j["alpha"] = alpha;
  j["delta"] = rep.delta(alpha);
  j["Ns"] = Ns;
  j["c2"] = c2s;
  try {
    const GrowthFit g = growth_rate_fit(Ns, c2s, rep.delta(alpha));
    j["fit"] = {{"log_mode", g.log_mode}, {"slope", g.slope}, {"intercept", g.intercept}, {"r2", g.r2},
                {"delta", g.delta},       {"rel_deviation", g.rel_deviation}, {"matches", g.matches}};
    if (g.log_mode)
      std::cout << "log fit: c2 = " << fmt(g.intercept) << " + " << fmt(g.slope) << " log N, R^2 = " << fmt(g.r2) << "\n";
    else
      std::cout << "power fit: slope " << fmt(g.slope) << " vs delta " << fmt(g.delta) << ", R^2 = " << fmt(g.r2) << "\n";
  } catch (const std::logic_error& e) {
    j["fit"] = nullptr;
    j["fit_error"] = e.what();
    std::cout << "no growth fit: " << e.what() << "\n";
  }
  if (crossed) {
    j["cross_check_max_rel_discrepancy"] = max_rel;
    std::cout << "max relative discrepancy brute/fast: " << fmt(max_rel) << "\n";
  }
  out.write("constants.csv", csv.str());
  out.write_json("constants.json", j);
  out.finish();
  return 0;
}

int cmd_detect(const Common& c, bool null_z, bool null_linear) {
  const Loaded l = load(c);
  const ModelParams p = model_from(l.cfg);
  Outputs out(c, "detect", l);
  std::vector<int> Ns = l.cfg.get_ints("Ns");
  if (Ns.empty()) Ns = {64, 128, 256, 512, 1024, 2048, 4096};
  DetectorSpec spec;
  try {
    spec = choose_spec(p, Ns, l.cfg.get_double("epsilon", 0.05));
  } catch (const DetectorInapplicable& e) {
    std::cout << e.what() << "\n";
    out.write_json("detect.json", json{{"status", "inapplicable"}, {"reason", e.what()}});
    out.finish();
    return 3;
  }
  if (l.cfg.has("gamma")) spec.gamma = l.cfg.get_double("gamma", spec.gamma);
  if (l.cfg.has("alpha")) spec.alpha = l.cfg.get_double("alpha", spec.alpha);
  spec.validate();

  ExperimentConfig e;
  e.sim = sim_from(l.cfg);
  e.replicas = l.cfg.get_int("replicas", 200);
  e.mode = null_z ? ExperimentMode::NullZ : null_linear ? ExperimentMode::NullLinear : ExperimentMode::Coupled;
  e.min_separation = l.cfg.get_double("min_separation", 5.0);
  e.workers = resolve_workers(c.workers);
  if (e.mode != ExperimentMode::NullZ && !p.simulable()) {
    const std::string why = "detector inapplicable: dynamics not simulable with Wick renormalization alone";
    std::cout << why << "\n";
    out.write_json("detect.json", json{{"status", "inapplicable"}, {"reason", why}});
    out.finish();
    return 3;
  }

  std::vector<StatisticTrace> traces;
  const SeparationReport r = detect(spec, e, &traces);
  const bool null_mode = e.mode != ExperimentMode::Coupled;
  const int code = !null_mode && r.achieved ? 0 : 2;
  json j = to_json(r);
  j["status"] = code == 0 ? "separated" : "inconclusive";
  std::cout << "separation " << fmt(r.separation) << " at N=" << Ns.back() << " (" << to_string(e.mode) << "): "
            << (code == 0 ? "separated" : "inconclusive") << "\n";
  std::ostringstream csv;
  write_traces_csv(csv, traces, out.hash());
  out.write("traces.csv", csv.str());
  out.write_json("detect.json", j);
  out.finish();
  return code;
}

int cmd_besov(const Common& c, std::optional<double> alpha_flag, std::string field) {
  const Loaded l = load(c);
  Outputs out(c, "besov", l);
  if (field.empty()) field = l.cfg.get_string("field", "Z");
  const int workers = resolve_workers(c.workers);
  RegularityOptions o;
  o.blocks = l.cfg.get_int("blocks", o.blocks);
  o.bootstrap = l.cfg.get_int("bootstrap", o.bootstrap);
  o.seed = l.cfg.get_u64("seed", 1);
  o.workers = workers;

  std::vector<SpectralField> samples;
  double reference = 0.0;
  json j;
  if (field == "synthetic") {
    const int d = l.cfg.get_int("d", 1);
    const int N = l.cfg.get_int("N", 1024);
    const double a = alpha_flag ? *alpha_flag : l.cfg.get_double("synthetic_alpha", 0.3);
    int levels = 0;
    while ((2 << levels) <= N) ++levels;
    levels = l.cfg.get_int("synthetic_levels", levels);
    samples = synthetic_ensemble(d, N, a, levels, l.cfg.get_int("replicas", 100), o.seed);
    reference = a;
    j["d"] = d;
    j["N"] = N;
  } else if (field == "Z" || field == "Y") {
    SimConfig s = sim_from(l.cfg);
    const int R = l.cfg.get_int("replicas", 200);
    const ExponentReport rep = compute_exponents(s.params);
    j["params"] = to_json(s.params);
    j["N"] = s.N;
    if (field == "Z") {
      const OuTables t = ou_tables(s.params, *make_lattice(s.params.d, s.N));
      samples.assign(static_cast<std::size_t>(R), SpectralField(make_lattice(s.params.d, s.N)));
      parallel_for(samples.size(), workers, [&](std::size_t r) {
        RngStream rng(s.seed, r, Purpose::ZLaw);
        sample_stationary(t, samples[r], rng);
      });
      reference = rep.regularity_Z();
    } else {
      if (!s.params.simulable()) throw std::invalid_argument("Y sampling needs a simulable model");
      s.simulate_u = false;
      auto ens = simulate_ensemble(s, R, workers);
      std::ostringstream js;
      write_ensemble_jsonl(js, s, ens, out.hash());
      out.write("ensemble.jsonl", js.str());
      for (auto& x : ens) samples.push_back(std::move(x.Y));
      reference = rep.regularity_Y();
    }
  } else {
    throw std::invalid_argument("field must be Z, Y or synthetic");
  }
  const RegularityEstimate e = estimate_regularity(samples, o);
  j["field"] = field;
  j["samples"] = e.samples;
  j["exponent"] = e.exponent;
  j["band90"] = {e.lower, e.upper};
  j["reference"] = reference;
  j["blocks"] = e.blocks;
  j["mean_sup"] = e.mean_sup;
  j["r2"] = e.r2;
  std::cout << field << " regularity " << fmt(e.exponent) << " [" << fmt(e.lower) << ", " << fmt(e.upper)
            << "], reference " << fmt(reference) << "\n";
  out.write_json("besov.json", j);
  out.finish();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wickstat: Wick renormalization constants, regime classification and the singularity detector"};
  app.require_subcommand(1);
  app.set_version_flag("--version", code_version());

  Common cc, cs, cd, cb;
  auto* classify = app.add_subcommand("classify", "classify the regime of a model");
  add_common(classify, cc);
  auto* constants = app.add_subcommand("constants", "renormalization constants over an N grid");
  add_common(constants, cs);
  bool cross = false;
  constants->add_flag("--cross-check", cross, "compare brute-force and fast c2");
  auto* detect = app.add_subcommand("detect", "run the singularity-detector experiment");
  add_common(detect, cd);
  bool null_z = false, null_linear = false;
  detect->add_flag("--null", null_z, "control: both ensembles from the Gaussian law");
  detect->add_flag("--null-linear", null_linear, "control: u simulated without the nonlinearity");
  auto* besov = app.add_subcommand("besov", "estimate Besov regularity of sampled fields");
  add_common(besov, cb);
  std::optional<double> alpha;
  std::string field;
  besov->add_option("--alpha", alpha, "exponent of the synthetic field");
  besov->add_option("--field", field, "Z, Y or synthetic");
  // "besov synthetic --alpha 0.3"
  std::string positional;
  besov->add_option("source", positional, "shorthand for --field");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*classify) return cmd_classify(cc);
    if (*constants) return cmd_constants(cs, cross);
    if (*detect) return cmd_detect(cd, null_z, null_linear);
    if (*besov) return cmd_besov(cb, alpha, field.empty() ? positional : field);
  } catch (const BlowUpError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
