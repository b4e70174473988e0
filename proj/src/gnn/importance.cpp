#include "fpnc/gnn/importance.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "fpnc/errors.hpp"
#include "fpnc/gnn/policy.hpp"
#include "fpnc/prolong/prolong.hpp"

namespace fpnc {

std::vector<ImportanceInstance> prepare_importance_set(const std::vector<std::pair<ServerGraph, std::size_t>>& items,
                                                       const AnalysisOptions& options) {
  std::vector<ImportanceInstance> set;
  for (const auto& [net, foi] : items) {
    ImportanceInstance inst;
    inst.net = net;
    inst.foi = foi;
    inst.view = tandem_view(net, foi);
    inst.graph = transform_graph(net, foi, inst.view);
    auto plain = analyze_plain(net, foi, options);
    if (!plain.success) throw AnalysisError("reference analysis failed: " + plain.failure);
    inst.fifo_bound = plain.objective_value;
    if (inst.fifo_bound <= 0) throw AnalysisError("reference bound must be positive");
    set.push_back(std::move(inst));
  }
  return set;
}

Rational mean_delay_gap(const std::vector<ImportanceInstance>& set, const ModelParams& params,
                        const std::vector<AnalysisGraph>* graphs, const AnalysisOptions& options) {
  if (set.empty()) throw UsageError("empty evaluation set");
  Rational sum = 0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& inst = set[i];
    const auto& g = graphs ? graphs->at(i) : inst.graph;
    auto alts = select_stable_top_k(inst.net, inst.view, g, forward(g, params), 1);
    auto eval = evaluate_alternatives(inst.net, inst.foi, alts, options);
    sum += (inst.fifo_bound - *eval.outcomes[eval.best_index].bound) / inst.fifo_bound;
  }
  return Rational(sum / static_cast<long>(set.size()));
}

std::size_t pooled_node_count(const std::vector<ImportanceInstance>& set) {
  std::size_t n = 0;
  for (const auto& inst : set) n += inst.graph.node_count();
  return n;
}

Rational permutation_importance(const std::vector<ImportanceInstance>& set, const ModelParams& params, std::size_t feature,
                                std::uint64_t seed, const std::optional<std::vector<std::size_t>>& permutation,
                                const AnalysisOptions& options) {
  if (feature >= params.features) throw UsageError("feature index out of range");
  const std::size_t pooled = pooled_node_count(set);
  std::vector<std::size_t> perm;
  if (permutation) {
    perm = *permutation;
    if (perm.size() != pooled) throw UsageError("permutation must cover every pooled node");
  } else {
    perm.resize(pooled);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
  }

  std::vector<std::pair<std::size_t, Eigen::Index>> slots;
  std::vector<double> values;
  for (std::size_t i = 0; i < set.size(); ++i)
    for (Eigen::Index v = 0; v < set[i].graph.features.cols(); ++v) {
      slots.emplace_back(i, v);
      values.push_back(set[i].graph.features(static_cast<Eigen::Index>(feature), v));
    }
  std::vector<AnalysisGraph> graphs;
  for (const auto& inst : set) graphs.push_back(inst.graph);
  for (std::size_t s = 0; s < pooled; ++s) {
    auto [gi, v] = slots[perm[s]];
    graphs[gi].features(static_cast<Eigen::Index>(feature), v) = values[s];
  }
  return Rational(mean_delay_gap(set, params, nullptr, options) - mean_delay_gap(set, params, &graphs, options));
}

}  // namespace fpnc
