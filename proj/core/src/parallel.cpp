#include "stqc/parallel.hpp"

#include <cstdlib>
#include <string>

#include "stqc/errors.hpp"

namespace stqc {

std::size_t worker_count() {
  if (const char* env = std::getenv("STQC_THREADS"); env != nullptr && *env != '\0') {
    try {
      std::size_t pos = 0;
      const long v = std::stol(env, &pos);
      if (pos != std::string(env).size() || v < 1) throw ConfigError("");
      return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      throw ConfigError(std::string("STQC_THREADS must be a positive integer, got '") + env + "'");
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace stqc
