#pragma once

#include <cstdint>

#include "fpnc/netmodel/network.hpp"

namespace fpnc {

enum class TopologyKind { tandem, tree, erdos_renyi };

struct IntRange {
  std::size_t min = 1;
  std::size_t max = 1;
};

struct GeneratorConfig {
  TopologyKind kind = TopologyKind::tandem;
  double edge_probability = 0.3;  // erdos_renyi only
  IntRange servers{5, 15};
  IntRange flows{12, 40};
  IntRange path_length{3, 6};
  std::uint64_t seed = 0;
  /// Flow rates are divided by the smallest integer that brings every server to
  /// at most this utilization.
  Rational max_utilization{9, 10};
  std::size_t max_retries = 200;
};

/// Ranges of the training dataset: 5-15 servers, 12-40 flows, paths of 3-6 hops.
GeneratorConfig train_generator_config(TopologyKind kind, std::uint64_t seed);

/// Random feedforward network, deterministic in cfg.seed.
///
/// Curve parameters are drawn uniformly from {1/1000, ..., 1000/1000}. Erdos-Renyi
/// edges are oriented from lower to higher index; trees are sink trees (each
/// server links to a random lower-indexed parent). A flow path has a uniform
/// length, starts at a uniform server from which that length is reachable, and
/// walks uniformly among successors that can still complete it; topologies
/// without such paths are redrawn. Throws UsageError when the ranges cannot be
/// met within the retry budget.
ServerGraph generate(const GeneratorConfig& cfg);

const char* to_string(TopologyKind kind);
TopologyKind parse_topology_kind(const std::string& text);

}  // namespace fpnc
