#include "wickstat/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wickstat {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty()) throw std::invalid_argument("config key '" + key + "': not a number: '" + v + "'");
  return x;
}

long long to_integer(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty()) throw std::invalid_argument("config key '" + key + "': not an integer: '" + v + "'");
  return x;
}

}  // namespace

const std::vector<std::string>& known_config_keys() {
  static const std::vector<std::string> keys = {
      // ModelParams
      "d", "sigma", "m", "k", "n", "N_table", "M_table", "coupling", "wick_closable",
      // SimConfig
      "N", "dt", "T_burn", "t", "dealias", "grid_N", "seed", "grading", "blowup", "tail_tol", "simulate_u", "zero_start",
      // constants
      "Ns", "alpha", "method", "rel_tol", "cross_check",
      // detect
      "replicas", "epsilon", "gamma", "normalization", "min_separation",
      // besov
      "field", "blocks", "bootstrap", "synthetic_alpha", "synthetic_levels"};
  return keys;
}

ConfigMap ConfigMap::parse(std::string_view text) {
  ConfigMap c;
  std::istringstream is{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return c;
}

ConfigMap ConfigMap::load(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open config file " + file.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parse(os.str());
}

void ConfigMap::set(const std::string& key, const std::string& value) {
  const auto& keys = known_config_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end())
    throw std::invalid_argument("unknown config key '" + key + "'");
  entries_[key] = value;
}

void ConfigMap::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("override must look like key=value: '" + assignment + "'");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

std::optional<std::string> ConfigMap::get(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
  return get(key).value_or(fallback);
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
  auto v = get(key);
  return v ? to_double(key, *v) : fallback;
}

int ConfigMap::get_int(const std::string& key, int fallback) const {
  auto v = get(key);
  return v ? static_cast<int>(to_integer(key, *v)) : fallback;
}

std::uint64_t ConfigMap::get_u64(const std::string& key, std::uint64_t fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  const long long x = to_integer(key, *v);
  if (x < 0) throw std::invalid_argument("config key '" + key + "' must be nonnegative");
  return static_cast<std::uint64_t>(x);
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw std::invalid_argument("config key '" + key + "': not a boolean: '" + *v + "'");
}

std::vector<double> ConfigMap::get_doubles(const std::string& key) const {
  std::vector<double> out;
  if (auto v = get(key))
    for (const auto& s : split(*v)) out.push_back(to_double(key, s));
  return out;
}

std::vector<int> ConfigMap::get_ints(const std::string& key) const {
  std::vector<int> out;
  if (auto v = get(key))
    for (const auto& s : split(*v)) out.push_back(static_cast<int>(to_integer(key, s)));
  return out;
}

std::vector<std::string> ConfigMap::get_strings(const std::string& key) const {
  if (auto v = get(key)) return split(*v);
  return {};
}

std::string ConfigMap::str() const {
  std::string s;
  for (const auto& [k, v] : entries_) s += k + "=" + v + "\n";
  return s;
}

nlohmann::ordered_json ConfigMap::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : entries_) j[k] = v;
  return j;
}

ConfigMap preset(const std::string& name) {
  if (name == "phi4_2") return ConfigMap::parse("d=2\nsigma=2\nm=0\nk=3\nn=0,0,0,0\nN=32\nNs=8,16,32,64\n");
  if (name == "phi4_3") return ConfigMap::parse("d=3\nsigma=2\nm=0\nk=3\nn=0,0,0,0\nNs=2,4,8,16\n");
  if (name == "frac_phi4")
    return ConfigMap::parse(
        "d=1\nsigma=0.75\nm=0\nk=3\nn=0,0,0,0\nN=64\nNs=64,128,256,512,1024,2048,4096\nreplicas=200\n");
  if (name == "kpz")
    return ConfigMap::parse(
        "d=1\nsigma=2\nm=0\nk=2\nn=0,1,1\nN_table=const:-1,deriv:0,deriv:0\nM_table=const:1\nNs=1,2,4,8,16,32,64\n");
  if (name == "kpz_like") return ConfigMap::parse("d=1\nsigma=2\nm=0\nk=2\nn=0,1,1\nNs=8,16,32,64,128,256\n");
  throw std::invalid_argument("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() { return {"phi4_2", "phi4_3", "frac_phi4", "kpz", "kpz_like"}; }

ModelParams model_from(const ConfigMap& c) {
  ModelParams p;
  p.d = c.get_int("d", p.d);
  p.sigma = c.get_double("sigma", p.sigma);
  p.m = c.get_double("m", p.m);
  p.k = c.get_int("k", p.k);
  p.n = c.get_doubles("n");
  if (p.n.empty()) p.n.assign(static_cast<std::size_t>(p.k) + 1, 0.0);
  if (c.has("N_table")) {
    std::vector<Multiplier> t;
    for (const auto& s : c.get_strings("N_table")) t.push_back(Multiplier::parse(s));
    p.N_table = std::move(t);
  }
  if (c.has("M_table")) p.M_table = Multiplier::parse(*c.get("M_table"));
  p.coupling = c.get_double("coupling", p.coupling);
  if (c.has("wick_closable")) p.wick_closable = c.get_bool("wick_closable", false);
  p.validate();
  return p;
}

SimConfig sim_from(const ConfigMap& c) {
  SimConfig s;
  s.params = model_from(c);
  s.N = c.get_int("N", s.N);
  s.dt = c.get_double("dt", s.dt);
  s.T_burn = c.get_double("T_burn", s.T_burn);
  s.t = c.get_double("t", s.t);
  s.dealias = c.get_int("dealias", s.dealias);
  s.grid_N = c.get_int("grid_N", s.grid_N);
  s.seed = c.get_u64("seed", s.seed);
  s.grading = c.get_double("grading", s.grading);
  s.blowup = c.get_double("blowup", s.blowup);
  s.tail_tol = c.get_double("tail_tol", s.tail_tol);
  s.simulate_u = c.get_bool("simulate_u", s.simulate_u);
  s.zero_start = c.get_bool("zero_start", s.zero_start);
  s.validate();
  return s;
}

nlohmann::ordered_json to_json(const ModelParams& p) {
  nlohmann::ordered_json j;
  j["d"] = p.d;
  j["sigma"] = p.sigma;
  j["m"] = p.m;
  j["k"] = p.k;
  std::vector<double> n;
  for (int i = 0; i <= p.k; ++i) n.push_back(p.n_at(i));
  j["n"] = n;
  if (p.N_table) {
    std::vector<std::string> t;
    for (const auto& mu : *p.N_table) t.push_back(mu.str());
    j["N_table"] = t;
  }
  if (p.M_table) j["M_table"] = p.M_table->str();
  j["coupling"] = p.coupling;
  if (p.wick_closable) j["wick_closable"] = *p.wick_closable;
  return j;
}

nlohmann::ordered_json to_json(const SimConfig& c) {
  nlohmann::ordered_json j;
  j["params"] = to_json(c.params);
  j["N"] = c.N;
  j["dt"] = c.dt;
  j["T_burn"] = c.burn_in();
  j["t"] = c.t;
  j["dealias"] = c.dealias;
  j["grid_N"] = c.grid_N;
  j["seed"] = c.seed;
  j["grading"] = c.grading;
  j["blowup"] = c.blowup;
  j["tail_tol"] = c.tail_tol;
  j["simulate_u"] = c.simulate_u;
  j["zero_start"] = c.zero_start;
  return j;
}

}  // namespace wickstat
