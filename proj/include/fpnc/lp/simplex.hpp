#pragma once

#include <string>
#include <vector>

#include "fpnc/minplus/affine.hpp"

namespace fpnc {

class Budget;

/// minimize objective subject to constraints[i] >= 0 and variables >= 0.
struct LinearProgram {
  std::vector<ThetaId> variables;
  AffineExpr objective;
  std::vector<AffineExpr> constraints;

  /// Human-readable inequality listing, one constraint per line.
  std::string to_text() const;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Rational value = 0;
  Assignment assignment;
};

/// Exact two-phase dense simplex over rationals with Bland's rule.
///
/// Throws UsageError when a constraint references a variable not listed in the
/// program. With a budget, the deadline is checked between pivots.
LpSolution solve(const LinearProgram& lp, Budget* budget = nullptr);

const char* to_string(LpStatus status);

}  // namespace fpnc
