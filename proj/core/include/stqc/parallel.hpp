#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace stqc {

/// Worker pool size: STQC_THREADS when set (ConfigError if not a positive
/// integer), otherwise the hardware concurrency, at least 1.
std::size_t worker_count();

/// Runs f(i) for i in [0, n) on up to `workers` threads. Results are stored by
/// index, so output order never depends on completion order. The exception of
/// the lowest failing index is rethrown.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, F&& f, std::size_t workers = worker_count()) {
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(std::max<std::size_t>(workers, 1), std::max<std::size_t>(n, 1));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace stqc
