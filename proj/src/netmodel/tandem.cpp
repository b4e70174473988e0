#include "fpnc/netmodel/tandem.hpp"

#include <algorithm>
#include <map>

#include "fpnc/errors.hpp"

namespace fpnc {

std::vector<Crossing> crossings_on(const ServerGraph& net, const std::vector<std::size_t>& servers,
                                   const std::vector<std::size_t>& excluded) {
  std::map<std::size_t, std::size_t> position;
  for (std::size_t i = 0; i < servers.size(); ++i) position[servers[i]] = i;

  std::vector<Crossing> out;
  for (std::size_t f = 0; f < net.flows.size(); ++f) {
    if (std::find(excluded.begin(), excluded.end(), f) != excluded.end()) continue;
    const auto& path = net.flows[f].path;
    std::size_t segment = 0;
    for (std::size_t k = 0; k < path.size();) {
      auto it = position.find(path[k]);
      if (it == position.end()) {
        ++k;
        continue;
      }
      std::size_t first = it->second;
      std::size_t last = first;
      std::size_t j = k + 1;
      while (j < path.size()) {
        auto next = position.find(path[j]);
        if (next == position.end() || next->second != last + 1) break;
        last = next->second;
        ++j;
      }
      out.push_back({f, first, last, segment++, j == path.size()});
      k = j;
    }
  }
  return out;
}

TandemView tandem_view(const ServerGraph& net, std::size_t foi) {
  if (foi >= net.flows.size()) throw UsageError("flow of interest does not exist");
  TandemView view;
  view.foi = foi;
  view.servers = net.flows[foi].path;
  view.crossings = crossings_on(net, view.servers, {foi});
  return view;
}

}  // namespace fpnc
