#include "momdec/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace momdec {

void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t)>& body, unsigned threads) {
  if (begin >= end) return;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::int64_t count = end - begin;
  threads = static_cast<unsigned>(std::min<std::int64_t>(threads, count));
  if (threads <= 1) {
    for (std::int64_t i = begin; i < end; ++i) body(i);
    return;
  }

  std::atomic<std::int64_t> next(begin);
  std::exception_ptr failure;
  std::atomic<bool> failed(false);
  auto worker = [&]() {
    try {
      for (;;) {
        const std::int64_t i = next.fetch_add(1);
        if (i >= end || failed.load()) return;
        body(i);
      }
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& thread : pool) thread.join();
  if (failed.load()) std::rethrow_exception(failure);
}

}  // namespace momdec
