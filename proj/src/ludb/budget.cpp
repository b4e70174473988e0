#include "fpnc/budget.hpp"

#include <string>

#include "fpnc/errors.hpp"

namespace fpnc {

Budget::Budget(std::optional<double> timeout_seconds, std::optional<std::size_t> memory_cap_bytes)
    : memory_cap_(memory_cap_bytes) {
  if (timeout_seconds)
    deadline_ = start_ + std::chrono::duration_cast<Clock::duration>(
                             std::chrono::duration<double>(*timeout_seconds));
}

void Budget::check() const {
  if (deadline_ && Clock::now() > *deadline_) throw BudgetExceeded("time limit exceeded");
  if (memory_cap_ && charged_.load() > *memory_cap_)
    throw BudgetExceeded("memory cap exceeded (" + std::to_string(charged_.load()) + " bytes)");
}

void Budget::charge(std::size_t bytes) {
  charged_ += bytes;
  if (memory_cap_ && charged_.load() > *memory_cap_)
    throw BudgetExceeded("memory cap exceeded (" + std::to_string(charged_.load()) + " bytes)");
}

void Budget::release(std::size_t bytes) {
  std::size_t current = charged_.load();
  charged_ = bytes > current ? 0 : current - bytes;
}

double Budget::elapsed_seconds() const {
  return std::chrono::duration<double>(Clock::now() - start_).count();
}

}  // namespace fpnc
