#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fpnc/budget.hpp"
#include "fpnc/ludb/analysis.hpp"
#include "fpnc/netmodel/tandem.hpp"
#include "fpnc/prolong/assignment.hpp"

namespace fpnc {

/// Exit options of one prolongable cross-flow (its sink lies on the foi path).
struct ProlongChoice {
  std::size_t flow;
  std::size_t crossing;
  /// Candidate exits, current exit first.
  std::vector<std::size_t> exits;
};

/// Per-flow options, ordered by flow index.
std::vector<ProlongChoice> prolongation_choices(const TandemView& view);
/// Flows with more than one exit option.
std::size_t prolongable_count(const TandemView& view);

ProlongationAssignment identity_assignment(const TandemView& view);

/// Size of the exhaustive pool: the product of per-flow option counts.
Rational exhaustive_count(const TandemView& view);

/// Cartesian product of exit options, identity first, lexicographic in flow order.
/// Throws UsageError when the pool exceeds `limit`.
AlternativeSet enumerate_all(const TandemView& view, std::size_t limit = 1'000'000);

/// Visits the exhaustive pool in enumerate_all order without materializing it;
/// stops early when the visitor returns false.
void for_each_assignment(const TandemView& view,
                         const std::function<bool(const ProlongationAssignment&)>& visit);

/// Pairs of crossing indices with interleaved intervals.
std::vector<std::pair<std::size_t, std::size_t>> interleaved_patterns(const TandemView& view);

/// involved: prolong both flows of a pattern to the later exit of the two.
/// overlapping: prolong them to the latest exit of any crossing overlapping either.
enum class HfpReading { involved, overlapping };

inline constexpr std::size_t kHfpPoolLimit = 1'000'000;

/// Identity plus every join of pattern moves; throws UsageError beyond kHfpPoolLimit.
AlternativeSet hfp_alternatives(const TandemView& view, HfpReading reading = HfpReading::involved,
                                Budget* budget = nullptr);

/// Whether the two hFP readings produce different pools.
bool hfp_readings_differ(const TandemView& view);

/// k distinct uniform draws without replacement; draws for a smaller k are a prefix.
AlternativeSet random_select(const AlternativeSet& pool, std::size_t k, std::uint64_t seed);

/// random_select over the exhaustive pool, without materializing large pools.
AlternativeSet random_exhaustive_select(const TandemView& view, std::size_t k, std::uint64_t seed);

/// The network with every assigned flow extended along the foi path.
ServerGraph apply_prolongation(const ServerGraph& net, const TandemView& view,
                               const ProlongationAssignment& assignment);

/// Whether every server stays strictly below its rate after the rewrite.
bool prolongation_stable(const ServerGraph& net, const TandemView& view, const ProlongationAssignment& assignment);

struct AlternativeOutcome {
  std::optional<Rational> bound;
  std::string failure;
};

struct EvaluationResult {
  std::size_t best_index = 0;
  ProlongationAssignment best;
  AnalysisResult best_result;
  std::vector<AlternativeOutcome> outcomes;
};

/// Exact minimum over the alternatives (first on ties). Failing alternatives are
/// recorded; throws AnalysisError when all fail. BudgetExceeded propagates.
EvaluationResult evaluate_alternatives(const ServerGraph& net, std::size_t foi,
                                       const AlternativeSet& alts, const AnalysisOptions& options = {},
                                       Budget* budget = nullptr);

/// One line per assignment: "f1->s4 f2->s5".
std::string dump_alternatives(const ServerGraph& net, const TandemView& view, const AlternativeSet& alts);

}  // namespace fpnc
