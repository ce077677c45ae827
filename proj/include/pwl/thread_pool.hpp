#pragma once

#include <cstddef>
#include <functional>

namespace pwl {

// Fixed-size worker pool with a deterministic parallel_for: work is split into
// chunks of a fixed grain and every output element is produced by exactly one
// chunk, so results are bitwise identical for any worker count (including 0,
// which runs inline on the calling thread).
class ThreadPool {
 public:
  explicit ThreadPool(int workers);
  ~ThreadPool();

  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  int workers() const { return workers_; }

  // Calls fn(begin, end) for consecutive ranges covering [0, n).
  // fn must only write state owned by indices in its range.
  void parallel_for(std::size_t n, std::size_t grain,
                    const std::function<void(std::size_t, std::size_t)>& fn);

  // Worker count from PWL_WORKERS, else hardware concurrency.
  static int default_workers();

 private:
  struct Impl;
  Impl* impl_;
  int workers_;
};

}  // namespace pwl
