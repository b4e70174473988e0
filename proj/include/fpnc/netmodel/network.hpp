#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fpnc/minplus/curves.hpp"

namespace fpnc {

/// Rate-latency server beta_{R,T}.
struct Server {
  std::string id;
  Rational rate;
  Rational latency;

  PseudoAffineCurve service() const { return PseudoAffineCurve::rate_latency(rate, latency); }
};

struct Link {
  std::size_t src;
  std::size_t dst;

  friend bool operator==(const Link&, const Link&) = default;
};

/// Unicast flow with a token-bucket arrival at its source; path holds server indices.
struct Flow {
  std::string id;
  Rational rate;
  Rational burst;
  std::vector<std::size_t> path;

  TokenBucket arrival() const { return TokenBucket{rate, AffineExpr(burst)}; }
  std::size_t source() const { return path.front(); }
  std::size_t sink() const { return path.back(); }
};

/// Feedforward server graph: servers, directed links and flows.
struct ServerGraph {
  std::vector<Server> servers;
  std::vector<Link> links;
  std::vector<Flow> flows;
  std::optional<std::string> foi;

  std::optional<std::size_t> server_index(const std::string& id) const;
  std::optional<std::size_t> flow_index(const std::string& id) const;
  std::optional<std::size_t> foi_index() const;
  bool has_link(std::size_t src, std::size_t dst) const;
  std::vector<std::size_t> successors(std::size_t server) const;
  /// Flows whose path contains the server, in flow order.
  std::vector<std::size_t> flows_at(std::size_t server) const;
  /// Position of `server` on the flow's path, if any.
  static std::optional<std::size_t> position_on_path(const Flow& flow, std::size_t server);
};

/// Content problems of a network; an empty list means the network is usable.
///
/// Checked: unique ids, positive server rates, nonnegative latencies and flow
/// parameters, paths along existing links without repetition, acyclic links,
/// strict stability at every server, existence of the flow of interest.
std::vector<std::string> validate(const ServerGraph& net);

/// Servers in a topological order of the link graph; throws UsageError on a cycle.
std::vector<std::size_t> topological_order(const ServerGraph& net);

}  // namespace fpnc
