#include "jbl/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace jbl {

namespace {

std::atomic<int> g_threads{-1};

int env_threads() {
  if (const char* s = std::getenv("BALLISTIC_LAB_THREADS")) {
    const int n = std::atoi(s);
    if (n >= 1) return n;
  }
  return 1;
}

} // namespace

int thread_count() {
  int n = g_threads.load();
  if (n < 0) {
    n = env_threads();
    g_threads.store(n);
  }
  return n;
}

void set_thread_count(int n) { g_threads.store(n >= 1 ? n : 1); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const int workers = thread_count();
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
  };
  std::vector<std::thread> pool;
  const int k = static_cast<int>(std::min<std::size_t>(workers, n));
  pool.reserve(k - 1);
  for (int w = 1; w < k; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
}

} // namespace jbl
