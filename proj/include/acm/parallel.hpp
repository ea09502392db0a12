#ifndef ACM_PARALLEL_HPP
#define ACM_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace acm {

/// out[i] = fn(i) for i in [0, count). Work is distributed dynamically; results
/// are placed by index so the output never depends on scheduling. If any call
/// throws, the exception of the lowest failing index is rethrown.
/// threads <= 0 selects hardware concurrency.
template <class Fn>
auto parallel_map(int count, int threads, Fn&& fn) -> std::vector<decltype(fn(0))> {
  using T = decltype(fn(0));
  std::vector<T> out(static_cast<std::size_t>(std::max(count, 0)));
  if (count <= 0) return out;
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, count);

  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace acm

#endif  // ACM_PARALLEL_HPP
