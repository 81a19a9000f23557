#pragma once

#include <exception>
#include <thread>
#include <utility>
#include <vector>

namespace ska {

// Runs fn(worker_index, worker_count) on `workers` threads and rethrows the
// first captured exception (by worker index, so failures are reproducible).
// Callers split work by striding or chunking on the worker index and merge
// their partial results with an order-independent reduction afterwards.
template <typename Fn>
void run_workers(int workers, Fn&& fn) {
  if (workers <= 1) {
    fn(0, 1);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        fn(w, workers);
      } catch (...) {
        errors[static_cast<size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace ska
