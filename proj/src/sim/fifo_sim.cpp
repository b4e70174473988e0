#include "fpnc/sim/fifo_sim.hpp"

#include <algorithm>
#include <cmath>

#include "fpnc/errors.hpp"

namespace fpnc {

namespace {

struct Packet {
  std::size_t flow;
  std::size_t seq;
  std::size_t hop;
  double size;
  double released;
  double time;  // arrival at the current server
};

}  // namespace

SimResult simulate_fifo(const ServerGraph& net, const SimOptions& options) {
  const auto order = topological_order(net);
  const auto foi = net.foi_index();
  SimResult out;

  double total_burst = 0, latency_sum = 0, spare = INFINITY, slowest = INFINITY;
  for (const auto& f : net.flows) total_burst += to_double(f.burst);
  for (std::size_t s = 0; s < net.servers.size(); ++s) {
    double load = 0;
    for (auto f : net.flows_at(s)) load += to_double(net.flows[f].rate);
    double rate = to_double(net.servers[s].rate);
    spare = std::min(spare, rate - load);
    slowest = std::min(slowest, rate);
    latency_sum += to_double(net.servers[s].latency);
  }
  if (!(spare > 0)) throw InstabilityError("simulation needs spare capacity at every server");
  out.horizon = options.horizon.value_or(2 * (latency_sum + total_burst / spare) + 1);
  out.chunk = options.chunk.value_or(total_burst > 0 ? total_burst / 200 : 1e-3);
  // Keep the packet count bounded.
  for (const auto& f : net.flows) {
    double volume = to_double(f.burst) + to_double(f.rate) * out.horizon;
    out.chunk = std::max(out.chunk, volume / static_cast<double>(options.max_packets_per_flow));
  }

  // Per server, the packets waiting to be served (filled as upstream servers finish).
  std::vector<std::vector<Packet>> inbox(net.servers.size());
  for (std::size_t f = 0; f < net.flows.size(); ++f) {
    const auto& flow = net.flows[f];
    double r = to_double(flow.rate), b = to_double(flow.burst);
    double volume = b + r * out.horizon;
    std::size_t seq = 0;
    for (double sent = 0; sent < volume; ++seq) {
      double next = std::min(volume, static_cast<double>(seq + 1) * out.chunk);
      double size = next - sent;
      sent = next;
      double released = (sent - b) / r;
      // Rounding must not push the last burst packet behind simultaneous traffic.
      if (released < 1e-12 * out.horizon) released = 0;
      inbox[flow.source()].push_back({f, seq, 0, size, released, released});
    }
  }

  out.max_delay.assign(net.flows.size(), 0);
  out.tolerance.resize(net.flows.size());
  for (std::size_t f = 0; f < net.flows.size(); ++f)
    out.tolerance[f] = 2.0 * static_cast<double>(net.flows[f].path.size()) * out.chunk / slowest;

  for (std::size_t s : order) {
    auto& queue = inbox[s];
    std::sort(queue.begin(), queue.end(), [&](const Packet& a, const Packet& b) {
      if (a.time != b.time) return a.time < b.time;
      bool fa = foi && a.flow == *foi, fb = foi && b.flow == *foi;
      if (fa != fb) return fb;
      if (a.flow != b.flow) return a.flow < b.flow;
      return a.seq < b.seq;
    });
    const double rate = to_double(net.servers[s].rate), latency = to_double(net.servers[s].latency);
    double busy_until = 0;
    for (auto& p : queue) {
      double start = std::max(p.time + latency, busy_until);
      busy_until = start + p.size / rate;
      const auto& path = net.flows[p.flow].path;
      if (p.hop + 1 == path.size()) {
        out.max_delay[p.flow] = std::max(out.max_delay[p.flow], busy_until - p.released);
      } else {
        Packet next = p;
        ++next.hop;
        next.time = busy_until;
        inbox[path[next.hop]].push_back(next);
      }
    }
    queue.clear();
    queue.shrink_to_fit();
  }
  return out;
}

}  // namespace fpnc
