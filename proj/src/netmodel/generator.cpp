#include "fpnc/netmodel/generator.hpp"

#include <algorithm>
#include <optional>
#include <random>

#include "fpnc/errors.hpp"

namespace fpnc {

namespace {

using Rng = std::mt19937_64;

std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Rational unit_parameter(Rng& rng) {
  return Rational(static_cast<long>(uniform_index(rng, 1, 1000)), 1000);
}

void build_links(ServerGraph& net, const GeneratorConfig& cfg, Rng& rng) {
  const std::size_t n = net.servers.size();
  switch (cfg.kind) {
    case TopologyKind::tandem:
      for (std::size_t i = 0; i + 1 < n; ++i) net.links.push_back({i, i + 1});
      break;
    case TopologyKind::tree:
      for (std::size_t i = 1; i < n; ++i) net.links.push_back({i, uniform_index(rng, 0, i - 1)});
      break;
    case TopologyKind::erdos_renyi: {
      std::bernoulli_distribution edge(cfg.edge_probability);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (edge(rng)) net.links.push_back({i, j});
      break;
    }
  }
}

// Number of servers on the longest directed path starting at each server.
std::vector<std::size_t> longest_from(const ServerGraph& net) {
  auto order = topological_order(net);
  std::vector<std::size_t> longest(net.servers.size(), 1);
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    for (std::size_t next : net.successors(*it)) longest[*it] = std::max(longest[*it], longest[next] + 1);
  return longest;
}

// Random walk restricted to successors that can still complete the drawn length.
std::optional<std::vector<std::size_t>> random_path(const ServerGraph& net, const std::vector<std::size_t>& longest,
                                                    const GeneratorConfig& cfg, Rng& rng) {
  const std::size_t reachable = *std::max_element(longest.begin(), longest.end());
  const std::size_t max_len = std::min(cfg.path_length.max, reachable);
  if (cfg.path_length.min > max_len) return std::nullopt;
  const std::size_t length = uniform_index(rng, cfg.path_length.min, max_len);
  std::vector<std::size_t> sources;
  for (std::size_t s = 0; s < longest.size(); ++s)
    if (longest[s] >= length) sources.push_back(s);
  std::vector<std::size_t> path{sources[uniform_index(rng, 0, sources.size() - 1)]};
  while (path.size() < length) {
    std::vector<std::size_t> next;
    for (std::size_t s : net.successors(path.back()))
      if (longest[s] >= length - path.size()) next.push_back(s);
    path.push_back(next[uniform_index(rng, 0, next.size() - 1)]);
  }
  return path;
}

}  // namespace

const char* to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::tandem: return "tandem";
    case TopologyKind::tree: return "tree";
    case TopologyKind::erdos_renyi: return "erdos_renyi";
  }
  return "?";
}

TopologyKind parse_topology_kind(const std::string& text) {
  if (text == "tandem") return TopologyKind::tandem;
  if (text == "tree") return TopologyKind::tree;
  if (text == "erdos_renyi" || text == "erdos-renyi" || text == "random") return TopologyKind::erdos_renyi;
  throw UsageError("unknown topology kind '" + text + "'");
}

GeneratorConfig train_generator_config(TopologyKind kind, std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.kind = kind;
  cfg.seed = seed;
  return cfg;
}

ServerGraph generate(const GeneratorConfig& cfg) {
  if (cfg.servers.min == 0 || cfg.servers.min > cfg.servers.max || cfg.flows.min > cfg.flows.max ||
      cfg.path_length.min == 0 || cfg.path_length.min > cfg.path_length.max)
    throw UsageError("empty generator range");
  if (cfg.max_utilization <= 0 || cfg.max_utilization >= 1)
    throw UsageError("max utilization must lie in (0, 1)");

  Rng rng(cfg.seed);
  ServerGraph net;
  // Redraw the topology until it admits paths of the requested length.
  for (std::size_t attempt = 0;; ++attempt) {
    if (attempt == cfg.max_retries)
      throw UsageError("no topology with flow paths of the requested length after " +
                       std::to_string(cfg.max_retries) + " attempts");
    net = ServerGraph{};
    const std::size_t n = uniform_index(rng, cfg.servers.min, cfg.servers.max);
    for (std::size_t i = 0; i < n; ++i) net.servers.push_back({"s" + std::to_string(i), 0, 0});
    build_links(net, cfg, rng);
    const auto longest = longest_from(net);
    const std::size_t m = uniform_index(rng, cfg.flows.min, cfg.flows.max);
    bool ok = true;
    for (std::size_t i = 0; i < m && ok; ++i) {
      auto path = random_path(net, longest, cfg, rng);
      if (!path) ok = false;
      else net.flows.push_back(Flow{"f" + std::to_string(i), 0, 0, std::move(*path)});
    }
    if (ok) break;
  }
  for (auto& s : net.servers) {
    s.rate = unit_parameter(rng);
    s.latency = unit_parameter(rng);
  }
  for (auto& f : net.flows) {
    f.rate = unit_parameter(rng);
    f.burst = unit_parameter(rng);
  }
  const std::size_t n = net.servers.size();

  // Scale rates down by an integer divisor until every server is below the target load.
  std::vector<Rational> load(n, 0);
  for (const auto& f : net.flows)
    for (std::size_t s : f.path) load[s] += f.rate;
  Rational worst = 0;
  for (std::size_t s = 0; s < n; ++s) worst = std::max(worst, Rational(load[s] / net.servers[s].rate));
  if (worst > cfg.max_utilization) {
    Rational ratio = worst / cfg.max_utilization;
    mpz_class divisor = ratio.get_num() / ratio.get_den();
    if (divisor * ratio.get_den() != ratio.get_num()) divisor += 1;
    for (auto& f : net.flows) {
      f.rate /= divisor;
      f.rate.canonicalize();
    }
  }
  return net;
}

}  // namespace fpnc
