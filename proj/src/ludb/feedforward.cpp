#include <chrono>

#include "fpnc/errors.hpp"
#include "fpnc/ludb/analysis.hpp"
#include "fpnc/prolong/prolong.hpp"

namespace fpnc {

std::string to_string(MethodKind kind) {
  switch (kind) {
    case MethodKind::ludb_ff: return "ludb-ff";
    case MethodKind::fp_exhaustive: return "fp-exhaustive";
    case MethodKind::fp_heuristic: return "fp-heuristic";
    case MethodKind::rnd_fp: return "rnd-fp";
    case MethodKind::rnd_hfp: return "rnd-hfp";
    case MethodKind::deepfp: return "deepfp";
  }
  return "ludb-ff";
}

MethodKind parse_method_kind(const std::string& name) {
  for (auto kind : {MethodKind::ludb_ff, MethodKind::fp_exhaustive, MethodKind::fp_heuristic,
                    MethodKind::rnd_fp, MethodKind::rnd_hfp, MethodKind::deepfp})
    if (to_string(kind) == name) return kind;
  throw UsageError("unknown method '" + name + "'");
}

bool method_uses_k(MethodKind kind) {
  return kind == MethodKind::rnd_fp || kind == MethodKind::rnd_hfp || kind == MethodKind::deepfp;
}

namespace {

AnalysisResult exhaustive(const ServerGraph& net, std::size_t foi, const TandemView& view,
                          const AnalysisOptions& options, Budget& budget) {
  AnalysisResult best;
  bool any = false;
  std::size_t explored = 0;
  for_each_assignment(view, [&](const ProlongationAssignment& a) {
    budget.check();
    ++explored;
    try {
      auto r = analyze_plain(apply_prolongation(net, view, a), foi, options, &budget);
      if (!any || r.objective_value < best.objective_value) {
        any = true;
        best = std::move(r);
        best.best_alternative = a;
      }
    } catch (const InstabilityError&) {
    } catch (const AnalysisError&) {
    } catch (const DomainError&) {
    }
    return true;
  });
  if (!any) throw AnalysisError("all prolongation alternatives failed");
  best.explored = explored;
  return best;
}

}  // namespace

AnalysisResult analyze_feedforward(const ServerGraph& net, std::size_t foi, const MethodConfig& method,
                                   const AnalysisOptions& options) {
  if (method.k == 0) throw UsageError("k must be positive");
  const auto started = std::chrono::steady_clock::now();
  Budget budget(options.timeout_seconds, options.memory_cap_bytes);
  AnalysisResult result;
  try {
    const auto view = tandem_view(net, foi);
    switch (method.kind) {
      case MethodKind::ludb_ff:
        result = analyze_plain(net, foi, options, &budget);
        break;
      case MethodKind::fp_exhaustive:
        result = exhaustive(net, foi, view, options, budget);
        break;
      case MethodKind::fp_heuristic:
        result = evaluate_alternatives(net, foi, hfp_alternatives(view, HfpReading::involved, &budget),
                                       options, &budget)
                     .best_result;
        break;
      case MethodKind::rnd_fp:
        result = evaluate_alternatives(net, foi, random_exhaustive_select(view, method.k, method.seed),
                                       options, &budget)
                     .best_result;
        break;
      case MethodKind::rnd_hfp:
        result = evaluate_alternatives(
                     net, foi, random_select(hfp_alternatives(view, HfpReading::involved, &budget), method.k, method.seed),
                     options, &budget)
                     .best_result;
        break;
      case MethodKind::deepfp: {
        if (!method.predictor) throw UsageError("deepfp needs a predictor");
        auto alts = method.predictor(net, foi, view, method.k);
        result = evaluate_alternatives(net, foi, alts, options, &budget).best_result;
        break;
      }
    }
    result.success = true;
  } catch (const BudgetExceeded& e) {
    result = AnalysisResult{};
    result.failure = e.what();
  } catch (const AnalysisError& e) {
    result = AnalysisResult{};
    result.failure = e.what();
  } catch (const InstabilityError& e) {
    result = AnalysisResult{};
    result.failure = e.what();
  } catch (const DomainError& e) {
    result = AnalysisResult{};
    result.failure = e.what();
  }
  result.method = to_string(method.kind);
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace fpnc
