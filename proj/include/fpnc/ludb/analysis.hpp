#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fpnc/budget.hpp"
#include "fpnc/ludb/method.hpp"
#include "fpnc/ludb/nesting.hpp"
#include "fpnc/ludb/term.hpp"
#include "fpnc/lp/simplex.hpp"

namespace fpnc {

enum class Objective { delay, output };

/// Theta grid: `points` values per variable over [0, upper], refined `zoom_levels`
/// times around the best point. Grids with more than `full_grid_limit` points are
/// searched coordinate-wise instead of exhaustively.
struct GridSpec {
  std::size_t points = 32;
  std::size_t zoom_levels = 3;
  std::size_t full_grid_limit = 4096;
  std::optional<Rational> upper;
};

struct AnalysisOptions {
  Objective objective = Objective::delay;
  /// Use every resolving cut subset instead of the minimal ones (small tandems only).
  bool all_cut_subsets = false;
  bool grid_refine = false;
  GridSpec grid;
  std::optional<double> timeout_seconds;
  std::optional<std::size_t> memory_cap_bytes;
};

/// End-to-end left-over service term of the foi for one cut set.
struct CompiledTerm {
  CutSet cuts;
  std::shared_ptr<TermContext> context;
  TermPtr service;
  TokenBucket foi_arrival;
};

struct ThetaOptimum {
  Rational bound;
  Assignment thetas;
};

struct AnalysisResult {
  bool success = false;
  std::string failure;
  /// Minimized quantity: delay bound or output burst, per objective.
  Rational objective_value;
  Rational delay_bound;
  TokenBucket output;
  std::size_t explored = 0;
  std::size_t cut_sets = 0;
  double wall_seconds = 0;
  std::string method;
  std::optional<ProlongationAssignment> best_alternative;
};

/// Compiles a nested sub-tandem: `crossings` are clipped to [first, last] of
/// `servers`, and their arrivals are bounded recursively through `ctx`.
TermPtr compile_nested_term(const NestingNode& node, const std::vector<Crossing>& crossings,
                            const std::vector<std::size_t>& servers, TermContext& ctx);

/// Left-over service for the flows `analysed` along `servers` after the given cuts.
TermPtr analyze_cut_tandem(const std::vector<std::size_t>& servers,
                           const std::vector<std::size_t>& analysed, const CutSet& cuts,
                           TermContext& ctx);
TermPtr analyze_cut_tandem(const TandemView& view, const CutSet& cuts, TermContext& ctx);

/// Cut sets to try for the foi tandem: {no cut} when nested.
std::vector<CutSet> candidate_cut_sets(const TandemView& view, bool all_subsets);

CompiledTerm compile_foi_term(const ServerGraph& net, std::size_t foi, const CutSet& cuts,
                              Budget* budget = nullptr);

/// The epigraph program minimizing the delay (or output burst) over all thetas.
LinearProgram delay_program(const PseudoAffineCurve& term, const TokenBucket& foi_arrival,
                            const ConstraintSet& constraints, const std::vector<ThetaId>& thetas,
                            Objective objective);

/// Throws AnalysisError("empty theta domain") when the constraints are infeasible.
ThetaOptimum optimize_delay(const PseudoAffineCurve& term, const TokenBucket& foi_arrival,
                            const ConstraintSet& constraints, const std::vector<ThetaId>& thetas,
                            Objective objective = Objective::delay, Budget* budget = nullptr);

/// Delay bound or output burst of a concrete curve.
Rational concrete_objective(const PseudoAffineCurve& curve, const TokenBucket& foi_arrival,
                            Objective objective);

/// Default upper end of the theta grid for a network.
Rational default_theta_upper(const ServerGraph& net);

/// Grid search over exact (closure) evaluations of the term; returns the better
/// of the grid minimum and `start`.
ThetaOptimum theta_grid_refine(const TermPtr& term, const ServerGraph& net,
                               const std::vector<ThetaId>& thetas, const TokenBucket& foi_arrival,
                               const GridSpec& grid, Objective objective,
                               std::optional<ThetaOptimum> start = std::nullopt,
                               Budget* budget = nullptr);

/// Best bound of one compiled term (LP, grid fallback, optional refinement).
ThetaOptimum bound_term(const CompiledTerm& term, const ServerGraph& net,
                        const AnalysisOptions& options, Budget* budget = nullptr);

/// LUDB-FF without prolongation: best bound over candidate cut sets.
AnalysisResult analyze_plain(const ServerGraph& net, std::size_t foi, const AnalysisOptions& options,
                             Budget* budget = nullptr);

/// Full analysis of one flow with the configured method, under the options' budget.
AnalysisResult analyze_feedforward(const ServerGraph& net, std::size_t foi, const MethodConfig& method,
                                   const AnalysisOptions& options = {});

}  // namespace fpnc
