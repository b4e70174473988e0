#pragma once

#include <optional>
#include <vector>

#include "fpnc/netmodel/network.hpp"

namespace fpnc {

struct SimOptions {
  /// Packet size; default: total burst / 200.
  std::optional<double> chunk;
  /// Arrivals are generated over [0, horizon]; default: twice a busy-period
  /// estimate, sum of latencies + total burst / smallest spare capacity.
  std::optional<double> horizon;
  std::size_t max_packets_per_flow = 200000;
};

struct SimResult {
  /// Largest observed end-to-end delay per flow.
  std::vector<double> max_delay;
  /// Packetization allowance per flow: 2 * hops * chunk / slowest server rate.
  std::vector<double> tolerance;
  double chunk = 0;
  double horizon = 0;
};

/// Store-and-forward FIFO simulation with greedy token-bucket sources.
///
/// Each server delays a packet by its latency and then transmits it at its rate
/// in arrival order; simultaneous arrivals place the flow of interest last. A
/// packet's delay runs from the instant its last byte is released by the source
/// to its departure from the sink.
SimResult simulate_fifo(const ServerGraph& net, const SimOptions& options = {});

}  // namespace fpnc
