#include "support.hpp"

#include <algorithm>
#include <cmath>

namespace fpnc::testing {

namespace {

ServerGraph example_base(const Rational& rate, const Rational& latency, const Rational& flow_rate,
                         const Rational& burst, std::size_t f2_last) {
  ServerGraph net;
  for (int i = 1; i <= 5; ++i) net.servers.push_back({"s" + std::to_string(i), rate, latency});
  for (std::size_t i = 0; i + 1 < 5; ++i) net.links.push_back({i, i + 1});
  auto path = [](std::size_t a, std::size_t b) {
    std::vector<std::size_t> p;
    for (std::size_t i = a; i <= b; ++i) p.push_back(i);
    return p;
  };
  net.flows.push_back({"foi", flow_rate, burst, path(1, 4)});
  net.flows.push_back({"f1", flow_rate, burst, path(0, 3)});
  net.flows.push_back({"f2", flow_rate, burst, path(0, f2_last)});
  net.flows.push_back({"f3", flow_rate, burst, path(2, 3)});
  net.foi = "foi";
  return net;
}

}  // namespace

ServerGraph example_network(const Rational& rate, const Rational& latency, const Rational& flow_rate,
                            const Rational& burst) {
  return example_base(rate, latency, flow_rate, burst, 2);
}

ServerGraph example_network_prolonged(const Rational& rate, const Rational& latency,
                                      const Rational& flow_rate, const Rational& burst) {
  return example_base(rate, latency, flow_rate, burst, 3);
}

ServerGraph tandem_network(std::size_t servers, const Rational& rate, const Rational& latency,
                           const std::vector<TandemFlow>& flows, const std::string& foi) {
  ServerGraph net;
  for (std::size_t i = 0; i < servers; ++i) net.servers.push_back({"s" + std::to_string(i + 1), rate, latency});
  for (std::size_t i = 0; i + 1 < servers; ++i) net.links.push_back({i, i + 1});
  for (const auto& f : flows) {
    Flow flow{f.id, f.rate, f.burst, {}};
    for (std::size_t p = f.first; p <= f.last; ++p) flow.path.push_back(p);
    net.flows.push_back(flow);
  }
  net.foi = foi;
  return net;
}

Rational random_rational(std::mt19937_64& rng, long lo, long hi, long denominator) {
  std::uniform_int_distribution<long> pick(lo, hi);
  return Rational(pick(rng), denominator);
}

double relative_error(double a, double b) {
  double scale = std::max({1e-12, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) / scale;
}

}  // namespace fpnc::testing

namespace fpnc::testing {

ServerGraph randomized_example(std::mt19937_64& rng) {
  auto net = example_network(1, 0, 1, 0);
  Rational min_rate = 0;
  for (auto& s : net.servers) {
    s.rate = random_rational(rng, 20, 60, 1);
    s.latency = random_rational(rng, 0, 300, 1000);
    if (min_rate == 0 || s.rate < min_rate) min_rate = s.rate;
  }
  // Even with every flow prolonged to the last server, utilization stays below 0.9.
  Rational u = random_rational(rng, 50, 900, 1000);
  for (auto& f : net.flows) {
    f.rate = u * min_rate / 4 * random_rational(rng, 500, 1000, 1000);
    f.burst = random_rational(rng, 1, 1000, 1000);
  }
  return net;
}

}  // namespace fpnc::testing
