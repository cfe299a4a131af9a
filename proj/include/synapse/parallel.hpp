#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace synapse {

/// Worker count: `requested` if positive, else $SYNAPSE_WORKERS, else the
/// hardware concurrency. Results never depend on this value.
int resolve_workers(int requested);

/// Runs body(i) for i in [0, n) over `workers` threads in static contiguous
/// chunks. Callers write into per-index slots so output is schedule-independent.
template <typename Body>
void parallel_for(std::size_t n, int workers, Body&& body) {
  const std::size_t nw = std::min<std::size_t>(static_cast<std::size_t>(resolve_workers(workers)), n);
  if (nw <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::jthread> threads;
  threads.reserve(nw);
  const std::size_t chunk = (n + nw - 1) / nw;
  for (std::size_t w = 0; w < nw; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  threads.clear();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace synapse
