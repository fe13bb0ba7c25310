// ipod: outlier detection and robust regression via iterative thresholding
// Copyright 2026 The ipod Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace ipod {

/// Number of worker threads to use when the caller passes 0 (= auto).
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for i in [0, count) on up to n_threads threads.  Work items must
/// write only to their own output slots; results are then independent of the
/// partitioning.  The first exception thrown by any item is rethrown.
inline void parallel_for(std::size_t count, int n_threads, const std::function<void(std::size_t)>& fn) {
  n_threads = resolve_threads(n_threads);
  if (n_threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  std::mutex err_mutex;
  std::exception_ptr first_error;
  const std::size_t n_workers = std::min<std::size_t>(static_cast<std::size_t>(n_threads), count);
  std::vector<std::size_t> next(1, 0);
  std::mutex next_mutex;
  for (std::size_t w = 0; w < n_workers; ++w) {
    workers.emplace_back([&]() {
      for (;;) {
        std::size_t i;
        {
          std::lock_guard<std::mutex> lock(next_mutex);
          if (next[0] >= count) return;
          i = next[0]++;
        }
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace ipod
