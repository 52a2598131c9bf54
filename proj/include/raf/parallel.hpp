#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace raf {

/// Worker count: explicit value if positive, else RAF_WORKERS, else hardware concurrency.
inline unsigned resolve_workers(int requested = 0) {
  if (requested > 0) return static_cast<unsigned>(requested);
  if (const char* env = std::getenv("RAF_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

/// Runs body(begin, end) over contiguous chunks of [0, count). Each index is
/// visited exactly once; results must be written to index-owned slots.
template <class Body>
void parallel_chunks(std::size_t count, unsigned workers, Body&& body) {
  workers = std::max(1U, workers);
  if (workers == 1 || count < 2) {
    if (count > 0) body(std::size_t{0}, count);
    return;
  }
  const std::size_t chunks = std::min<std::size_t>(count, std::size_t{workers} * 8);
  std::vector<std::thread> pool;
  std::mutex err_mutex;
  std::exception_ptr first_error;
  std::size_t next = 0;
  std::mutex next_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t c;
      {
        std::lock_guard lock(next_mutex);
        if (next == chunks) return;
        c = next++;
      }
      const std::size_t begin = count * c / chunks;
      const std::size_t end = count * (c + 1) / chunks;
      try {
        body(begin, end);
      } catch (...) {
        std::lock_guard lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  const unsigned n = std::min<unsigned>(workers, static_cast<unsigned>(chunks));
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  parallel_chunks(count, workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) fn(i);
  });
}

}  // namespace raf
