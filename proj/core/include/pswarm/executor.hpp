#pragma once

#include <cstddef>
#include <functional>
#include <memory>

namespace pswarm {

/// Fixed-size worker pool for index-parallel loops. Each index is handled by
/// exactly one task and callers write results into per-index slots, so the
/// worker count never changes what is computed.
class Executor {
 public:
  explicit Executor(std::size_t workers = 1);
  ~Executor();
  Executor(Executor&&) noexcept;
  Executor& operator=(Executor&&) noexcept;

  std::size_t workers() const noexcept { return workers_; }

  /// Calls fn(i) for i in [0, n). If any call throws, the exception from the
  /// smallest failing index is rethrown after all calls finish.
  void for_each_index(std::size_t n, const std::function<void(std::size_t)>& fn) const;

  static const Executor& serial();

 private:
  struct Arena;
  std::size_t workers_;
  std::unique_ptr<Arena> arena_;
};

}  // namespace pswarm
