#include <doctest.h>

#include <algorithm>

#include "fpnc/errors.hpp"
#include "fpnc/netmodel/generator.hpp"
#include "fpnc/netmodel/network_io.hpp"
#include "fpnc/netmodel/tandem.hpp"
#include "support.hpp"

using namespace fpnc;

namespace {

bool mentions(const std::vector<std::string>& issues, const std::string& text) {
  return std::any_of(issues.begin(), issues.end(), [&](const std::string& s) { return s.find(text) != std::string::npos; });
}

bool params_in_unit_interval(const ServerGraph& net) {
  for (const auto& s : net.servers)
    if (s.rate <= 0 || s.rate > 1 || s.latency <= 0 || s.latency > 1) return false;
  for (const auto& f : net.flows)
    if (f.rate <= 0 || f.rate > 1 || f.burst <= 0 || f.burst > 1) return false;
  return true;
}

}  // namespace

TEST_CASE("validation of the example network") {
  auto net = testing::example_network(40, 1, 9, 1);
  CHECK(validate(net).empty());

  auto reversed = net;
  std::reverse(reversed.flows[2].path.begin(), reversed.flows[2].path.end());
  CHECK(mentions(validate(reversed), "path against link direction"));

  auto zero = net;
  zero.servers[0].rate = 0;
  CHECK(mentions(validate(zero), "nonpositive rate"));

  auto lighter = testing::example_network(40, 1, 10, 1);
  CHECK(mentions(validate(testing::example_network(40, 1, 10, 1)), "unstable"));  // four flows of rate 10 at s3
  lighter.flows[0].rate = 1;
  lighter.flows[1].rate = 1;
  CHECK(validate(lighter).empty());

  auto cyclic = net;
  cyclic.links.push_back({4, 0});
  CHECK(mentions(validate(cyclic), "acyclic"));
}

TEST_CASE("generator") {
  GeneratorConfig cfg;
  cfg.kind = TopologyKind::tandem;
  cfg.servers = {5, 5};
  cfg.flows = {4, 4};
  cfg.seed = 7;
  auto net = generate(cfg);
  CHECK(net.servers.size() == 5);
  CHECK(net.flows.size() == 4);
  CHECK(params_in_unit_interval(net));
  CHECK(validate(net).empty());
  CHECK(serialize_network(generate(cfg)) == serialize_network(net));

  GeneratorConfig er = train_generator_config(TopologyKind::erdos_renyi, 3);
  er.servers = {10, 10};
  er.path_length = {2, 4};
  auto g = generate(er);
  for (const auto& l : g.links) CHECK(l.src < l.dst);
  CHECK(validate(g).empty());

  GeneratorConfig impossible = cfg;
  impossible.path_length = {9, 12};
  CHECK_THROWS_AS(generate(impossible), UsageError);
}

TEST_CASE("generated networks follow the training ranges") {
  std::size_t min_servers = 1000, max_servers = 0, min_flows = 1000, max_flows = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    auto kind = static_cast<TopologyKind>(seed % 3);
    auto net = generate(train_generator_config(kind, seed));
    min_servers = std::min(min_servers, net.servers.size());
    max_servers = std::max(max_servers, net.servers.size());
    min_flows = std::min(min_flows, net.flows.size());
    max_flows = std::max(max_flows, net.flows.size());
    REQUIRE(validate(net).empty());
    REQUIRE(params_in_unit_interval(net));
    for (const auto& f : net.flows) REQUIRE((f.path.size() >= 3 && f.path.size() <= 6));
  }
  CHECK(min_servers >= 5);
  CHECK(max_servers <= 15);
  CHECK(min_flows >= 12);
  CHECK(max_flows <= 40);
}

TEST_CASE("file format round trip") {
  auto net = testing::example_network(40, Rational(1, 10), Rational(5, 2), Rational(1, 3));
  auto text = serialize_network(net);
  CHECK(serialize_network(parse_network(text)) == text);
  auto decimal = parse_network("SERVERS\na 0.5 1e-1\nb 1/2 0\nLINKS\na b\nFLOWS\nx 0.25 2 a b\nFOI\nx\n");
  CHECK(decimal.servers[0].rate == Rational(1, 2));
  CHECK(decimal.servers[0].latency == Rational(1, 10));
  CHECK(decimal.flows[0].path.size() == 2);
  CHECK(decimal.foi == std::optional<std::string>("x"));
  CHECK_THROWS_AS(parse_network("SERVERS\na x 1\n"), UsageError);
  CHECK_THROWS_AS(parse_network("FLOWS\nx 1 1 nowhere\n"), UsageError);
}

TEST_CASE("tandem view of the example") {
  auto net = testing::example_network(40, 1, 1, 1);
  auto view = tandem_view(net, 0);
  CHECK(view.servers == std::vector<std::size_t>{1, 2, 3, 4});
  REQUIRE(view.crossings.size() == 3);
  CHECK(view.crossings[0] == Crossing{1, 0, 2, 0, true});
  CHECK(view.crossings[1] == Crossing{2, 0, 1, 0, true});
  CHECK(view.crossings[2] == Crossing{3, 1, 2, 0, true});

  auto prolonged = tandem_view(testing::example_network_prolonged(40, 1, 1, 1), 0);
  CHECK(prolonged.crossings[1] == Crossing{2, 0, 2, 0, true});

  auto alone = testing::tandem_network(3, 1, 1, {{"foi", Rational(1, 2), 1, 0, 2}}, "foi");
  CHECK(tandem_view(alone, 0).crossings.empty());
  CHECK_THROWS_AS(tandem_view(alone, 5), UsageError);
}

TEST_CASE("flows leaving and rejoining the foi path are split") {
  ServerGraph net;
  for (int i = 0; i < 5; ++i) net.servers.push_back({"s" + std::to_string(i), 10, 1});
  net.links = {{0, 1}, {1, 2}, {2, 3}, {1, 4}, {4, 3}};
  net.flows.push_back({"foi", 1, 1, {0, 1, 2, 3}});
  net.flows.push_back({"x", 1, 1, {0, 1, 4, 3}});
  net.foi = "foi";
  REQUIRE(validate(net).empty());
  auto view = tandem_view(net, 0);
  REQUIRE(view.crossings.size() == 2);
  CHECK(view.crossings[0] == Crossing{1, 0, 1, 0, false});
  CHECK(view.crossings[1] == Crossing{1, 3, 3, 1, true});
}
