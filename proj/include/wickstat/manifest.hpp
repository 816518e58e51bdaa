#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace wickstat {

std::string sha256_hex(std::string_view data);

// Everything needed to rerun a command. The hash covers the command, config,
// seed, version and input hash; timestamps and output paths are recorded but
// do not enter it. The worker count is not recorded at all since outputs do
// not depend on it.
struct RunManifest {
  std::string command;
  nlohmann::ordered_json config;
  std::uint64_t seed = 0;
  std::string version;
  std::string input_hash;  // sha256 of the config file text, empty for presets
  std::string started_utc;
  std::string finished_utc;
  std::vector<std::string> outputs;

  std::string hash() const;
  nlohmann::ordered_json to_json() const;
};

// Current UTC time, or SOURCE_DATE_EPOCH when that is set.
std::string utc_now();
std::string code_version();

}  // namespace wickstat
