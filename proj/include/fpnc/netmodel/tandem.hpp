#pragma once

#include <vector>

#include "fpnc/netmodel/network.hpp"

namespace fpnc {

/// One contiguous run of a flow along a tandem, as 0-based tandem positions.
///
/// A flow that leaves the tandem and rejoins it later contributes one crossing
/// per run (`segment` counts them in path order).
struct Crossing {
  std::size_t flow;
  std::size_t first;
  std::size_t last;
  std::size_t segment = 0;
  /// The flow's sink is the last server of this run.
  bool ends_at_sink = false;

  friend bool operator==(const Crossing&, const Crossing&) = default;
};

/// A flow's path as a tandem, with every other flow reduced to its runs on it.
struct TandemView {
  std::size_t foi = 0;
  std::vector<std::size_t> servers;
  std::vector<Crossing> crossings;

  std::size_t size() const { return servers.size(); }
};

/// Runs of every flow not in `excluded` along the given server sequence.
std::vector<Crossing> crossings_on(const ServerGraph& net, const std::vector<std::size_t>& servers,
                                   const std::vector<std::size_t>& excluded);

/// Throws UsageError when `foi` is not a flow index.
TandemView tandem_view(const ServerGraph& net, std::size_t foi);

}  // namespace fpnc
