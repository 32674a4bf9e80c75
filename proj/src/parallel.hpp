#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace coopnet::detail {

/// Evaluates task(i) for i in [0, count) on up to `threads` workers. Results
/// are stored by index so the caller's reduction does not depend on
/// completion order. Tasks that had not started when `cancel` was raised are
/// left empty. The lowest-index exception is rethrown.
template <typename Result, typename Task>
std::vector<std::optional<Result>> parallel_map(std::size_t count, unsigned threads, Task task,
                                                const std::atomic<bool>* cancel = nullptr) {
  std::vector<std::optional<Result>> results(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      if (cancel && cancel->load()) continue;
      try {
        results[i] = task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), count));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  }

  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace coopnet::detail
