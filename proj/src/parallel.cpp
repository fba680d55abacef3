#include "divmean/parallel.hpp"

#include <cstdlib>
#include <string>

namespace divmean {

namespace {

unsigned threads_from_env() {
  if (const char* env = std::getenv("DIVMEAN_THREADS")) {
    try {
      const long n = std::stol(env);
      if (n >= 1) return static_cast<unsigned>(n);
    } catch (...) {
    }
  }
  return 1;
}

std::atomic<unsigned> g_threads{threads_from_env()};

}  // namespace

unsigned thread_count() { return g_threads.load(); }

void set_thread_count(unsigned n) { g_threads.store(n == 0 ? 1 : n); }

}  // namespace divmean
