#include "fpnc/netmodel/network.hpp"

#include <algorithm>
#include <set>

#include "fpnc/errors.hpp"

namespace fpnc {

std::optional<std::size_t> ServerGraph::server_index(const std::string& id) const {
  for (std::size_t i = 0; i < servers.size(); ++i)
    if (servers[i].id == id) return i;
  return std::nullopt;
}

std::optional<std::size_t> ServerGraph::flow_index(const std::string& id) const {
  for (std::size_t i = 0; i < flows.size(); ++i)
    if (flows[i].id == id) return i;
  return std::nullopt;
}

std::optional<std::size_t> ServerGraph::foi_index() const {
  if (!foi) return std::nullopt;
  return flow_index(*foi);
}

bool ServerGraph::has_link(std::size_t src, std::size_t dst) const {
  return std::find(links.begin(), links.end(), Link{src, dst}) != links.end();
}

std::vector<std::size_t> ServerGraph::successors(std::size_t server) const {
  std::vector<std::size_t> out;
  for (const auto& l : links)
    if (l.src == server) out.push_back(l.dst);
  return out;
}

std::vector<std::size_t> ServerGraph::flows_at(std::size_t server) const {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < flows.size(); ++f)
    if (position_on_path(flows[f], server)) out.push_back(f);
  return out;
}

std::optional<std::size_t> ServerGraph::position_on_path(const Flow& flow, std::size_t server) {
  auto it = std::find(flow.path.begin(), flow.path.end(), server);
  if (it == flow.path.end()) return std::nullopt;
  return static_cast<std::size_t>(it - flow.path.begin());
}

std::vector<std::size_t> topological_order(const ServerGraph& net) {
  const std::size_t n = net.servers.size();
  std::vector<std::size_t> indegree(n, 0);
  for (const auto& l : net.links) {
    if (l.src >= n || l.dst >= n) throw UsageError("link references unknown server");
    ++indegree[l.dst];
  }
  std::vector<std::size_t> order;
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indegree[i] == 0) ready.insert(i);
  while (!ready.empty()) {
    std::size_t s = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(s);
    for (const auto& l : net.links)
      if (l.src == s && --indegree[l.dst] == 0) ready.insert(l.dst);
  }
  if (order.size() != n) throw UsageError("link graph has a cycle");
  return order;
}

std::vector<std::string> validate(const ServerGraph& net) {
  std::vector<std::string> issues;
  const std::size_t n = net.servers.size();

  std::set<std::string> ids;
  for (const auto& s : net.servers) {
    if (!ids.insert(s.id).second) issues.push_back("duplicate server id " + s.id);
    if (s.rate <= 0) issues.push_back("server " + s.id + ": nonpositive rate");
    if (s.latency < 0) issues.push_back("server " + s.id + ": negative latency");
  }
  bool links_ok = true;
  for (const auto& l : net.links) {
    if (l.src >= n || l.dst >= n) {
      issues.push_back("link references unknown server");
      links_ok = false;
    } else if (l.src == l.dst) {
      issues.push_back("self-loop at server " + net.servers[l.src].id);
      links_ok = false;
    }
  }
  if (links_ok) {
    try {
      (void)topological_order(net);
    } catch (const UsageError&) {
      issues.push_back("link graph is not acyclic");
    }
  }

  std::set<std::string> flow_ids;
  std::vector<Rational> load(n, 0);
  for (const auto& f : net.flows) {
    if (!flow_ids.insert(f.id).second) issues.push_back("duplicate flow id " + f.id);
    if (f.rate < 0) issues.push_back("flow " + f.id + ": negative rate");
    if (f.burst < 0) issues.push_back("flow " + f.id + ": negative burst");
    if (f.path.empty()) {
      issues.push_back("flow " + f.id + ": empty path");
      continue;
    }
    std::set<std::size_t> seen;
    bool path_ok = true;
    for (std::size_t i = 0; i < f.path.size(); ++i) {
      std::size_t s = f.path[i];
      if (s >= n) {
        issues.push_back("flow " + f.id + ": unknown server on path");
        path_ok = false;
        break;
      }
      if (!seen.insert(s).second) {
        issues.push_back("flow " + f.id + ": server repeated on path");
        path_ok = false;
      }
      if (i > 0 && !net.has_link(f.path[i - 1], s)) {
        path_ok = false;
        if (net.has_link(s, f.path[i - 1]))
          issues.push_back("flow " + f.id + ": path against link direction");
        else
          issues.push_back("flow " + f.id + ": path uses missing link");
      }
    }
    if (path_ok)
      for (std::size_t s : f.path) load[s] += f.rate;
  }
  for (std::size_t s = 0; s < n; ++s)
    if (net.servers[s].rate > 0 && load[s] >= net.servers[s].rate)
      issues.push_back("server " + net.servers[s].id + ": unstable (load " +
                       format_rational(load[s]) + " >= rate " +
                       format_rational(net.servers[s].rate) + ")");
  if (net.foi && !net.flow_index(*net.foi)) issues.push_back("flow of interest " + *net.foi + " not found");
  return issues;
}

}  // namespace fpnc
