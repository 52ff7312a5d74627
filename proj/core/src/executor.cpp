#include "pswarm/executor.hpp"

#include <algorithm>
#include <exception>
#include <stdexcept>
#include <vector>

#include <tbb/blocked_range.h>
#include <tbb/info.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

namespace pswarm {

struct Executor::Arena {
  explicit Arena(int workers) : arena(workers) {}
  mutable tbb::task_arena arena;
};

Executor::Executor(std::size_t workers) : workers_(workers) {
  if (workers == 0) throw std::invalid_argument("Executor: workers must be >= 1");
  // Threads beyond the available cores add nothing; results never depend on the count.
  const int threads = std::min(static_cast<int>(workers), tbb::info::default_concurrency());
  if (threads > 1) arena_ = std::make_unique<Arena>(threads);
}

Executor::~Executor() = default;
Executor::Executor(Executor&&) noexcept = default;
Executor& Executor::operator=(Executor&&) noexcept = default;

void Executor::for_each_index(std::size_t n, const std::function<void(std::size_t)>& fn) const {
  if (!arena_ || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  arena_->arena.execute([&] {
    tbb::parallel_for(tbb::blocked_range<std::size_t>(0, n), [&](const tbb::blocked_range<std::size_t>& range) {
      for (std::size_t i = range.begin(); i != range.end(); ++i) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  });
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
}

const Executor& Executor::serial() {
  static const Executor instance(1);
  return instance;
}

}  // namespace pswarm
