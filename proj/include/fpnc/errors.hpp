#pragma once

#include <stdexcept>
#include <string>

namespace fpnc {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Arrival rate reaches a service rate; delay would be unbounded.
struct InstabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A theta assignment outside the domain where a curve is defined.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AnalysisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fpnc
