#include "fpnc/gnn/graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>

#include "fpnc/errors.hpp"
#include "fpnc/prolong/prolong.hpp"

namespace fpnc {

namespace {

std::vector<long> hops_to(const ServerGraph& net, std::size_t target) {
  // BFS on reversed links from the target.
  std::vector<long> dist(net.servers.size(), -1);
  std::vector<std::vector<std::size_t>> preds(net.servers.size());
  for (const auto& l : net.links) preds[l.dst].push_back(l.src);
  std::deque<std::size_t> queue{target};
  dist[target] = 0;
  while (!queue.empty()) {
    auto s = queue.front();
    queue.pop_front();
    for (auto p : preds[s])
      if (dist[p] < 0) {
        dist[p] = dist[s] + 1;
        queue.push_back(p);
      }
  }
  return dist;
}

}  // namespace

AnalysisGraph transform_graph(const ServerGraph& net, std::size_t foi, const TandemView& view) {
  // Servers of interest: the foi path, then every server a relevant flow visits
  // before its last server of interest, until nothing changes.
  std::set<std::size_t> servers(view.servers.begin(), view.servers.end());
  std::set<std::size_t> flows{foi};
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t f = 0; f < net.flows.size(); ++f) {
      const auto& path = net.flows[f].path;
      std::optional<std::size_t> last;
      for (std::size_t i = 0; i < path.size(); ++i)
        if (servers.count(path[i])) last = i;
      if (!last) continue;
      changed |= flows.insert(f).second;
      for (std::size_t i = 0; i <= *last; ++i) changed |= servers.insert(path[i]).second;
    }
  }

  AnalysisGraph g;
  std::vector<std::size_t> server_node(net.servers.size(), std::numeric_limits<std::size_t>::max());
  std::vector<std::size_t> flow_node(net.flows.size(), std::numeric_limits<std::size_t>::max());
  std::vector<Eigen::VectorXd> columns;
  auto add_node = [&](NodeKind kind) {
    g.kinds.push_back(kind);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(kFeatureWidth);
    x(static_cast<Eigen::Index>(kind)) = 1;
    columns.push_back(x);
    return g.kinds.size() - 1;
  };

  // Rates are relative to the fastest server so they share a scale with the other features.
  Rational top_rate = 0;
  for (std::size_t s : servers) top_rate = std::max(top_rate, net.servers[s].rate);
  const double rate_scale = top_rate > 0 ? to_double(top_rate) : 1.0;

  const auto hops = hops_to(net, view.servers.back());
  for (std::size_t s : servers) {
    auto v = add_node(NodeKind::server);
    server_node[s] = v;
    columns[v](3) = to_double(net.servers[s].rate) / rate_scale;
    columns[v](4) = to_double(net.servers[s].latency);
    columns[v](5) = static_cast<double>(hops[s]);
  }
  for (std::size_t f : flows) {
    auto v = add_node(NodeKind::flow);
    flow_node[f] = v;
    columns[v](3) = to_double(net.flows[f].rate) / rate_scale;
    columns[v](4) = to_double(net.flows[f].burst);
    columns[v](6) = f == foi ? 1.0 : 0.0;
  }

  for (const auto& l : net.links)
    if (servers.count(l.src) && servers.count(l.dst)) g.edges.emplace_back(server_node[l.src], server_node[l.dst]);
  for (std::size_t f : flows)
    for (std::size_t s : net.flows[f].path)
      if (servers.count(s)) g.edges.emplace_back(flow_node[f], server_node[s]);

  // One choice group per cross-flow, in crossing order of their final run.
  const auto choices = prolongation_choices(view);
  std::set<std::size_t> grouped;
  for (const auto& c : view.crossings) {
    if (!grouped.insert(c.flow).second) continue;
    ChoiceGroup group;
    group.flow = c.flow;
    group.flow_node = flow_node[c.flow];
    auto it = std::find_if(choices.begin(), choices.end(), [&](const ProlongChoice& p) { return p.flow == c.flow; });
    if (it != choices.end()) {
      group.exits = it->exits;
    } else {
      // Sink off the foi path: its last run's exit is the only choice.
      std::size_t exit = c.last;
      for (const auto& other : view.crossings)
        if (other.flow == c.flow) exit = std::max(exit, other.last);
      group.exits = {exit};
      group.prolongable = false;
    }
    for (std::size_t exit : group.exits) {
      auto v = add_node(NodeKind::prolongation);
      columns[v](5) = static_cast<double>(exit + 1);
      group.nodes.push_back(v);
      g.edges.emplace_back(group.flow_node, v);
      g.edges.emplace_back(v, server_node[view.servers[exit]]);
    }
    g.groups.push_back(std::move(group));
  }

  g.features.resize(kFeatureWidth, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t i = 0; i < columns.size(); ++i) g.features.col(static_cast<Eigen::Index>(i)) = columns[i];
  return g;
}

std::size_t graph_diameter(const AnalysisGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<std::size_t>> adj(n);
  for (auto [a, b] : g.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::size_t diameter = 1;
  std::vector<long> dist(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      auto v = queue.front();
      queue.pop_front();
      diameter = std::max(diameter, static_cast<std::size_t>(dist[v]));
      for (auto u : adj[v])
        if (dist[u] < 0) {
          dist[u] = dist[v] + 1;
          queue.push_back(u);
        }
    }
  }
  return diameter;
}

AnalysisGraph permute_nodes(const AnalysisGraph& g, const std::vector<std::size_t>& perm) {
  if (perm.size() != g.node_count()) throw UsageError("permutation size mismatch");
  AnalysisGraph out;
  out.kinds.resize(g.node_count());
  out.features.resize(g.features.rows(), g.features.cols());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    out.kinds[perm[i]] = g.kinds[i];
    out.features.col(static_cast<Eigen::Index>(perm[i])) = g.features.col(static_cast<Eigen::Index>(i));
  }
  for (auto [a, b] : g.edges) out.edges.emplace_back(perm[a], perm[b]);
  out.groups = g.groups;
  for (auto& group : out.groups) {
    group.flow_node = perm[group.flow_node];
    for (auto& v : group.nodes) v = perm[v];
  }
  return out;
}

ProlongationAssignment assignment_from_choices(const AnalysisGraph& g, const std::vector<std::size_t>& choices) {
  if (choices.size() != g.groups.size()) throw UsageError("one choice per flow group expected");
  ProlongationAssignment a;
  for (std::size_t i = 0; i < choices.size(); ++i) {
    const auto& group = g.groups[i];
    if (choices[i] >= group.exits.size()) throw UsageError("choice out of range");
    if (group.prolongable) a.exits[group.flow] = group.exits[choices[i]];
  }
  return a;
}

}  // namespace fpnc
