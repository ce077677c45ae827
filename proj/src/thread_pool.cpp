#include "pwl/thread_pool.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>
#include <vector>

namespace pwl {

struct ThreadPool::Impl {
  std::vector<std::thread> threads;
  std::mutex mu;
  std::condition_variable cv_work;
  std::condition_variable cv_done;
  const std::function<void(std::size_t, std::size_t)>* fn = nullptr;
  std::size_t n = 0;
  std::size_t grain = 1;
  std::atomic<std::size_t> next_chunk{0};
  std::size_t num_chunks = 0;
  std::atomic<std::size_t> chunks_done{0};
  std::uint64_t generation = 0;
  bool stop = false;

  void worker_loop() {
    std::uint64_t seen = 0;
    for (;;) {
      {
        std::unique_lock<std::mutex> lk(mu);
        cv_work.wait(lk, [&] { return stop || generation != seen; });
        if (stop) return;
        seen = generation;
      }
      run_chunks();
    }
  }

  void run_chunks() {
    for (;;) {
      const std::size_t c = next_chunk.fetch_add(1);
      if (c >= num_chunks) break;
      const std::size_t b = c * grain;
      const std::size_t e = std::min(n, b + grain);
      (*fn)(b, e);
      if (chunks_done.fetch_add(1) + 1 == num_chunks) {
        std::lock_guard<std::mutex> lk(mu);
        cv_done.notify_all();
      }
    }
  }
};

ThreadPool::ThreadPool(int workers) : impl_(new Impl), workers_(workers < 0 ? 0 : workers) {
  for (int i = 0; i < workers_; ++i) {
    impl_->threads.emplace_back([this] { impl_->worker_loop(); });
  }
}

ThreadPool::~ThreadPool() {
  {
    std::lock_guard<std::mutex> lk(impl_->mu);
    impl_->stop = true;
  }
  impl_->cv_work.notify_all();
  for (auto& t : impl_->threads) t.join();
  delete impl_;
}

void ThreadPool::parallel_for(std::size_t n, std::size_t grain,
                              const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  if (grain == 0) grain = 1;
  const std::size_t num_chunks = (n + grain - 1) / grain;
  if (workers_ == 0 || num_chunks == 1) {
    for (std::size_t c = 0; c < num_chunks; ++c) {
      fn(c * grain, std::min(n, (c + 1) * grain));
    }
    return;
  }
  {
    std::lock_guard<std::mutex> lk(impl_->mu);
    impl_->fn = &fn;
    impl_->n = n;
    impl_->grain = grain;
    impl_->num_chunks = num_chunks;
    impl_->next_chunk.store(0);
    impl_->chunks_done.store(0);
    ++impl_->generation;
  }
  impl_->cv_work.notify_all();
  impl_->run_chunks();  // caller participates
  std::unique_lock<std::mutex> lk(impl_->mu);
  impl_->cv_done.wait(lk, [&] { return impl_->chunks_done.load() == impl_->num_chunks; });
  impl_->fn = nullptr;
}

int ThreadPool::default_workers() {
  if (const char* env = std::getenv("PWL_WORKERS")) {
    const int v = std::atoi(env);
    if (v >= 0) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

}  // namespace pwl
