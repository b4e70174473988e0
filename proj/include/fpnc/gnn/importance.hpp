#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fpnc/gnn/graph.hpp"
#include "fpnc/gnn/model.hpp"
#include "fpnc/ludb/analysis.hpp"

namespace fpnc {

struct ImportanceInstance {
  ServerGraph net;
  std::size_t foi = 0;
  TandemView view;
  AnalysisGraph graph;
  /// Plain LUDB-FF bound, the gap reference.
  Rational fifo_bound;
};

/// Builds graphs and reference bounds. Throws when an instance cannot be analysed.
std::vector<ImportanceInstance> prepare_importance_set(const std::vector<std::pair<ServerGraph, std::size_t>>& items,
                                                       const AnalysisOptions& options = {});

/// Mean of (fifo - bound)/fifo over the set, with the bound of the stable top-1
/// prediction made from `graphs` (defaults to the instances' own graphs).
Rational mean_delay_gap(const std::vector<ImportanceInstance>& set, const ModelParams& params,
                        const std::vector<AnalysisGraph>* graphs = nullptr, const AnalysisOptions& options = {});

/// Baseline mean gap minus the mean gap after permuting one feature across all
/// nodes of the set. `permutation` maps pooled node slot i to slot perm[i];
/// without it a seeded shuffle is used.
Rational permutation_importance(const std::vector<ImportanceInstance>& set, const ModelParams& params, std::size_t feature,
                                std::uint64_t seed, const std::optional<std::vector<std::size_t>>& permutation = std::nullopt,
                                const AnalysisOptions& options = {});

/// Number of pooled node slots, the length a permutation must have.
std::size_t pooled_node_count(const std::vector<ImportanceInstance>& set);

}  // namespace fpnc
