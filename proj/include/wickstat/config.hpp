#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "wickstat/dynamics.hpp"
#include "wickstat/model.hpp"

namespace wickstat {

// Flat key = value configuration. Lines starting with '#' are comments; list
// values are comma separated. Keys mirror the ModelParams and SimConfig field
// names, plus a few per-command settings (see known_config_keys()).
class ConfigMap {
public:
  static ConfigMap parse(std::string_view text);
  static ConfigMap load(const std::filesystem::path& file);

  // Throws on unknown keys.
  void set(const std::string& key, const std::string& value);
  // "key=value"
  void apply_override(const std::string& assignment);
  void erase(const std::string& key) { entries_.erase(key); }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<int> get_ints(const std::string& key) const;
  std::vector<std::string> get_strings(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }
  // Sorted "key=value" lines; the canonical text form.
  std::string str() const;
  nlohmann::ordered_json to_json() const;

private:
  std::map<std::string, std::string> entries_;
};

const std::vector<std::string>& known_config_keys();

// phi4_2, phi4_3, frac_phi4, kpz, kpz_like
ConfigMap preset(const std::string& name);
std::vector<std::string> preset_names();

ModelParams model_from(const ConfigMap& c);
SimConfig sim_from(const ConfigMap& c);

nlohmann::ordered_json to_json(const ModelParams& p);
nlohmann::ordered_json to_json(const SimConfig& c);

}  // namespace wickstat
