#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <optional>

namespace fpnc {

/// Wall-clock and allocation budget for one analysis.
///
/// Memory is tracked by explicit charges at the allocation sites that dominate an
/// analysis (term nodes, LP tableaux); it approximates, not measures, the heap.
class Budget {
 public:
  using Clock = std::chrono::steady_clock;

  Budget() = default;
  Budget(std::optional<double> timeout_seconds, std::optional<std::size_t> memory_cap_bytes);

  /// Throws BudgetExceeded when the deadline has passed or the cap is exceeded.
  void check() const;
  void charge(std::size_t bytes);
  void release(std::size_t bytes);

  std::size_t charged_bytes() const { return charged_.load(); }
  bool has_deadline() const { return deadline_.has_value(); }
  double elapsed_seconds() const;

 private:
  Clock::time_point start_ = Clock::now();
  std::optional<Clock::time_point> deadline_;
  std::optional<std::size_t> memory_cap_;
  std::atomic<std::size_t> charged_{0};
};

}  // namespace fpnc
