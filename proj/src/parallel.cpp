#include "synapse/parallel.hpp"

#include <cstdlib>
#include <string>

namespace synapse {

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SYNAPSE_WORKERS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace synapse
