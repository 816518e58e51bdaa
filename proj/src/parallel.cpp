#include "wickstat/parallel.hpp"

#include <cstdlib>
#include <string>

namespace wickstat {

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("WICKSTAT_WORKERS")) {
    try {
      const int w = std::stoi(env);
      if (w > 0) return w;
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace wickstat
