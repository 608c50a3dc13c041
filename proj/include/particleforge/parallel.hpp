#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace particleforge {

namespace detail {
inline std::atomic<unsigned>& worker_count_storage() {
  static std::atomic<unsigned> n{0};
  return n;
}
}  // namespace detail

/// Process-wide worker pool size; 0 restores the default (hardware
/// concurrency).
inline void set_worker_count(unsigned n) { detail::worker_count_storage() = n; }

inline unsigned worker_count() {
  unsigned n = detail::worker_count_storage().load();
  if (n != 0) return n;
  unsigned hw = std::thread::hardware_concurrency();
  return hw != 0 ? hw : 1;
}

/// Runs fn(i) for i in [0, count). Work items must write only to their own
/// output slots; reductions happen after the loop so results do not depend
/// on the worker count.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  if (count == 0) return;
  unsigned workers = worker_count();
  if (workers <= 1 || count == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  unsigned spawn = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  threads.reserve(spawn);
  for (unsigned i = 0; i < spawn; ++i) threads.emplace_back(body);
  for (auto& t : threads) t.join();
  if (failed.load() && error) std::rethrow_exception(error);
}

}  // namespace particleforge
