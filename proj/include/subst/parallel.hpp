#pragma once

// Deterministic parallel-for over an index range. Work items write to
// preallocated slots, so results are independent of scheduling. The worker
// count is capped by the SUBST_THREADS environment variable.

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace subst {

inline int workerCount() {
  unsigned hw = std::thread::hardware_concurrency();
  int n = hw ? (int)hw : 1;
  if (const char* env = std::getenv("SUBST_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1 && cap < n) n = cap;
  }
  return n;
}

template <typename Fn>
void parallelFor(size_t count, Fn&& fn) {
  int workers = workerCount();
  if (workers <= 1 || count < 2) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> nextIndex{0};
  std::exception_ptr firstError;
  std::mutex errorMutex;
  auto worker = [&]() {
    for (;;) {
      size_t i = nextIndex.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(errorMutex);
        if (!firstError) firstError = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  size_t spawn = std::min((size_t)workers, count) - 1;
  pool.reserve(spawn);
  for (size_t t = 0; t < spawn; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (firstError) std::rethrow_exception(firstError);
}

}  // namespace subst
