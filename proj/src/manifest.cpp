#include "wickstat/manifest.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#ifndef WICKSTAT_VERSION
#define WICKSTAT_VERSION "0.0.0"
#endif

namespace wickstat {

std::string sha256_hex(std::string_view data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 || EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw std::runtime_error("sha256 failed");
  std::ostringstream os;
  os << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) os << std::setw(2) << static_cast<int>(digest[i]);
  return os.str();
}

std::string RunManifest::hash() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["config"] = config;
  j["seed"] = seed;
  j["version"] = version;
  j["input_hash"] = input_hash;
  return sha256_hex(j.dump());
}

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["manifest_hash"] = hash();
  j["command"] = command;
  j["version"] = version;
  j["seed"] = seed;
  j["input_hash"] = input_hash;
  j["config"] = config;
  j["started_utc"] = started_utc;
  j["finished_utc"] = finished_utc;
  j["outputs"] = outputs;
  return j;
}

std::string utc_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  if (const char* fixed = std::getenv("SOURCE_DATE_EPOCH")) t = static_cast<std::time_t>(std::strtoll(fixed, nullptr, 10));
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string code_version() { return WICKSTAT_VERSION; }

}  // namespace wickstat
