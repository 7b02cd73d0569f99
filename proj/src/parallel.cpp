#include "fracbs/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fracbs {

unsigned worker_count() {
  if (const char* env = std::getenv("FRACBS_THREADS")) {
    int v = std::atoi(env);
    if (v > 0)
      return static_cast<unsigned>(v);
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1u : hc;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  unsigned workers = worker_count();
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i)
      body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n)
        return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
        next = n;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  unsigned spawn = static_cast<unsigned>(std::min<std::size_t>(workers, n)) - 1;
  for (unsigned t = 0; t < spawn; ++t)
    pool.emplace_back(run);
  run();
  for (auto& th : pool)
    th.join();
  if (failure)
    std::rethrow_exception(failure);
}

} // namespace fracbs
