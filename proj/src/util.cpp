#include "cheeselab/util.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace cheeselab::util {

int thread_cap() {
  const char* env = std::getenv("CHEESE_LAB_THREADS");
  if (!env) return 1;
  const long v = std::strtol(env, nullptr, 10);
  if (v <= 1) return 1;
  const long hw = static_cast<long>(std::thread::hardware_concurrency());
  return static_cast<int>(std::min(v, std::max(hw, 1L)));
}

void parallel_for(long n, const std::function<void(long)>& body) {
  const int threads = thread_cap();
  if (threads <= 1 || n < 256) {
    for (long i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (long i = t; i < n; i += threads) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace cheeselab::util
