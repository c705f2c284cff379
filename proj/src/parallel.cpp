#include "aniso/parallel.hpp"

#include <cstdlib>
#include <string>

namespace aniso {

std::size_t worker_count() {
  std::size_t count = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ANISO_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap > 0) count = std::min<std::size_t>(count, static_cast<std::size_t>(cap));
    } catch (const std::exception&) {
      // Unparseable values leave the default in place.
    }
  }
  return count;
}

}  // namespace aniso
