#include "wgnls/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace wgnls {

int worker_count() {
  const char* env = std::getenv("WGNLS_WORKERS");
  if (env == nullptr || *env == '\0') return 1;
  try {
    return std::clamp(std::stoi(env), 1, 256);
  } catch (const std::exception&) {
    return 1;
  }
}

}  // namespace wgnls
