#include "gnn_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fpnc/netmodel/tandem.hpp"
#include "support.hpp"

namespace fpnc::testing {

namespace {

double objective(const AnalysisGraph& g, const ModelParams& p, const std::vector<std::size_t>& actions, double weight) {
  return weight * log_probability(forward(g, p), actions);
}

}  // namespace

AnalysisGraph random_graph(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> len(2, 4);
  std::size_t n = len(rng);
  std::vector<TandemFlow> flows{{"foi", 1, 1, 0, n - 1}};
  std::uniform_int_distribution<std::size_t> count(1, 3), pos(0, n - 1);
  std::size_t m = count(rng);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t a = pos(rng), b = pos(rng);
    flows.push_back({"x" + std::to_string(i), 1, random_rational(rng, 1, 1000, 1000), std::min(a, b),
                     std::max(a, b)});
  }
  auto net = tandem_network(n, 100, random_rational(rng, 1, 1000, 1000), flows, "foi");
  auto g = transform_graph(net, 0, tandem_view(net, 0));
  std::uniform_real_distribution<double> unit(0.1, 1.0);
  for (Eigen::Index v = 0; v < g.features.cols(); ++v)
    for (Eigen::Index f = 3; f < 5; ++f)
      if (g.features(f, v) != 0) g.features(f, v) = unit(rng);
  return g;
}

double max_gradient_error(const AnalysisGraph& g, const ModelParams& p, const std::vector<std::size_t>& actions,
                          double weight) {
  auto grad = backward(g, p, actions, weight).flatten();
  auto values = p.flatten();
  const double eps = 1e-5;
  double worst = 0;
  ModelParams q = p;
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto shifted = values;
    shifted[i] = values[i] + eps;
    q.assign(shifted);
    double up = objective(g, q, actions, weight);
    shifted[i] = values[i] - eps;
    q.assign(shifted);
    double down = objective(g, q, actions, weight);
    double fd = (up - down) / (2 * eps);
    double scale = std::max({std::abs(fd), std::abs(grad[i]), 1e-6});
    worst = std::max(worst, std::abs(fd - grad[i]) / scale);
  }
  return worst;
}

std::vector<std::size_t> random_actions(const AnalysisGraph& g, std::mt19937_64& rng) {
  std::vector<std::size_t> actions;
  for (const auto& group : g.groups) actions.push_back(std::uniform_int_distribution<std::size_t>(0, group.nodes.size() - 1)(rng));
  return actions;
}

double equivariance_error(const AnalysisGraph& g, const ModelParams& p, std::mt19937_64& rng) {
  std::vector<std::size_t> perm(g.node_count());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  auto base = forward(g, p);
  auto out = forward(permute_nodes(g, perm), p);
  double worst = 0;
  for (std::size_t i = 0; i < base.probabilities.size(); ++i)
    for (std::size_t j = 0; j < base.probabilities[i].size(); ++j)
      worst = std::max(worst, std::abs(out.probabilities[i][j] - base.probabilities[i][j]));
  return worst;
}

}  // namespace fpnc::testing
