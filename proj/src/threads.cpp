#include "caphj/threads.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace caphj {

int thread_count() {
  if (const char* env = std::getenv("CAPHJ_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return std::min(n, 256);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace caphj
