#ifndef SATSP_PARALLEL_HPP_
#define SATSP_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace satsp {

/// Runs task(i) for i in [0, count) on up to `threads` workers. Tasks must write
/// only to their own slot i, so output is identical for any worker count.
/// The first exception thrown by a task is rethrown after all workers join.
template <typename Task>
void parallel_for(std::int64_t count, int threads, Task&& task) {
  if (threads <= 1 || count <= 1) {
    for (std::int64_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::int64_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::jthread> pool;
  const auto workers = std::min<std::int64_t>(threads, count);
  for (std::int64_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace satsp

#endif  // SATSP_PARALLEL_HPP_
