#include "fpnc/gnn/policy.hpp"

#include <cmath>
#include <queue>

#include "fpnc/errors.hpp"
#include "fpnc/prolong/prolong.hpp"

namespace fpnc {

std::vector<std::vector<std::size_t>> top_k_choices(const PolicyOutput& policy, std::size_t k) {
  if (k == 0) throw UsageError("k must be at least 1");
  const auto& probs = policy.probabilities;
  // Per group, choice indices sorted by decreasing probability (stable: node order on ties).
  std::vector<std::vector<std::size_t>> order(probs.size());
  for (std::size_t g = 0; g < probs.size(); ++g) {
    for (std::size_t j = 0; j < probs[g].size(); ++j) order[g].push_back(j);
    std::stable_sort(order[g].begin(), order[g].end(), [&](auto a, auto b) { return probs[g][a] > probs[g][b]; });
  }

  struct State {
    double log_p;
    std::vector<std::size_t> ranks;
    std::vector<std::size_t> choices;
    std::size_t pivot;
  };
  auto worse = [](const State& a, const State& b) {
    if (a.log_p != b.log_p) return a.log_p < b.log_p;
    return a.choices > b.choices;
  };
  auto make = [&](std::vector<std::size_t> ranks, std::size_t pivot) {
    State s{0, std::move(ranks), {}, pivot};
    for (std::size_t g = 0; g < probs.size(); ++g) {
      s.choices.push_back(order[g][s.ranks[g]]);
      s.log_p += std::log(probs[g][s.choices.back()]);
    }
    return s;
  };

  // Each rank vector is reached once: successors only advance groups >= pivot.
  std::priority_queue<State, std::vector<State>, decltype(worse)> queue(worse);
  queue.push(make(std::vector<std::size_t>(probs.size(), 0), 0));
  std::vector<std::vector<std::size_t>> out;
  while (!queue.empty() && out.size() < k) {
    State s = queue.top();
    queue.pop();
    for (std::size_t g = s.pivot; g < probs.size(); ++g) {
      if (s.ranks[g] + 1 >= order[g].size()) continue;
      auto ranks = s.ranks;
      ++ranks[g];
      queue.push(make(std::move(ranks), g));
    }
    out.push_back(std::move(s.choices));
  }
  return out;
}

AlternativeSet select_top_k(const AnalysisGraph& g, const PolicyOutput& policy, std::size_t k) {
  AlternativeSet set;
  set.source = AlternativeSource::deepfp;
  for (const auto& choices : top_k_choices(policy, k)) set.items.push_back(assignment_from_choices(g, choices));
  return set;
}

AlternativeSet select_stable_top_k(const ServerGraph& net, const TandemView& view, const AnalysisGraph& g,
                                   const PolicyOutput& policy, std::size_t k) {
  AlternativeSet out;
  out.source = AlternativeSource::deepfp;
  for (const auto& choices : top_k_choices(policy, 1024 * k)) {
    auto a = assignment_from_choices(g, choices);
    if (prolongation_stable(net, view, a)) out.items.push_back(std::move(a));
    if (out.size() == k) return out;
  }
  if (out.items.empty()) out.items.push_back(identity_assignment(view));
  return out;
}

Predictor make_gnn_predictor(std::shared_ptr<const ModelParams> params, std::optional<std::size_t> iterations) {
  if (!params) throw UsageError("deepfp needs model parameters");
  return [params, iterations](const ServerGraph& net, std::size_t foi, const TandemView& view, std::size_t k) {
    auto g = transform_graph(net, foi, view);
    return select_stable_top_k(net, view, g, forward(g, *params, iterations), k);
  };
}

}  // namespace fpnc
