#include "parcorr/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace parcorr {

unsigned resolve_threads(unsigned requested) {
  unsigned n = requested;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PARCORR_THREADS")) {
    unsigned cap = 0;
    const char* end = env + std::strlen(env);
    auto [ptr, ec] = std::from_chars(env, end, cap);
    if (ec == std::errc{} && ptr == end && cap > 0) n = std::min(n, cap);
  }
  return n;
}

}  // namespace parcorr
