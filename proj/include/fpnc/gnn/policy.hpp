#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "fpnc/gnn/graph.hpp"
#include "fpnc/gnn/model.hpp"
#include "fpnc/ludb/method.hpp"

namespace fpnc {

/// Choice-index vectors of the k most probable joint choices, assuming groups are
/// independent, in decreasing probability. Equal probabilities are ordered
/// lexicographically by choice index.
std::vector<std::vector<std::size_t>> top_k_choices(const PolicyOutput& policy, std::size_t k);

AlternativeSet select_top_k(const AnalysisGraph& g, const PolicyOutput& policy, std::size_t k);

/// The k most probable assignments that keep every server stable, searching at
/// most 1024k candidates deep; the identity if none qualifies.
AlternativeSet select_stable_top_k(const ServerGraph& net, const TandemView& view, const AnalysisGraph& g,
                                   const PolicyOutput& policy, std::size_t k);

/// Predictor for MethodKind::deepfp, built on select_stable_top_k.
Predictor make_gnn_predictor(std::shared_ptr<const ModelParams> params,
                             std::optional<std::size_t> iterations = std::nullopt);

}  // namespace fpnc
