#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <utility>
#include <vector>

#include "fpnc/netmodel/tandem.hpp"
#include "fpnc/prolong/assignment.hpp"

namespace fpnc {

enum class NodeKind { server, flow, prolongation };

/// Input feature width. Layout per node:
///   0-2  one-hot kind (server, flow, prolongation)
///   3    rate (server or flow), divided by the largest server rate
///   4    latency (server) or burst (flow)
///   5    server: hops to the foi sink along links (-1 if unreachable);
///        prolongation: 1-based position of its exit on the foi path
///   6    1 for the flow of interest
///   7-12 zero padding
inline constexpr std::size_t kFeatureWidth = 13;

/// Prolongation nodes of one cross-flow; the first is its current exit.
struct ChoiceGroup {
  std::size_t flow;
  std::size_t flow_node;
  std::vector<std::size_t> nodes;
  std::vector<std::size_t> exits;
  /// False for flows whose sink is off the foi path: a single fixed choice.
  bool prolongable = true;
};

struct AnalysisGraph {
  std::vector<NodeKind> kinds;
  /// kFeatureWidth x node count, one column per node.
  Eigen::MatrixXd features;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<ChoiceGroup> groups;

  std::size_t node_count() const { return kinds.size(); }
};

/// Server/flow/prolongation graph of the part of the network that influences the
/// foi: its path, the flows crossing it, and recursively everything upstream.
AnalysisGraph transform_graph(const ServerGraph& net, std::size_t foi, const TandemView& view);

/// Longest shortest-path distance between connected nodes (at least 1).
std::size_t graph_diameter(const AnalysisGraph& g);

/// Node i of the input becomes node perm[i] of the output.
AnalysisGraph permute_nodes(const AnalysisGraph& g, const std::vector<std::size_t>& perm);

/// Assignment picking choice `choices[i]` in group i.
ProlongationAssignment assignment_from_choices(const AnalysisGraph& g, const std::vector<std::size_t>& choices);

}  // namespace fpnc
