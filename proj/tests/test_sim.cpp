#include <doctest.h>

#include "fpnc/netmodel/generator.hpp"
#include "fpnc/prolong/prolong.hpp"
#include "fpnc/sim/fifo_sim.hpp"
#include "support.hpp"

using namespace fpnc;

TEST_CASE("single server simulation reaches T + b/R") {
  auto net = testing::tandem_network(1, 4, Rational(1, 2), {{"foi", 1, 2, 0, 0}}, "foi");
  auto r = simulate_fifo(net);
  CHECK(r.max_delay[0] == doctest::Approx(0.5 + 2.0 / 4).epsilon(1e-12));
}

TEST_CASE("cross traffic ahead of the foi adds its burst") {
  auto net = testing::tandem_network(1, 4, 0, {{"foi", 1, 1, 0, 0}, {"x", 1, 3, 0, 0}}, "foi");
  auto r = simulate_fifo(net);
  CHECK(r.max_delay[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("simulated delays stay below analysed bounds") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10; ++i) {
    auto net = testing::randomized_example(rng);
    auto sim = simulate_fifo(net);
    auto view = tandem_view(net, 0);
    auto r = evaluate_alternatives(net, 0, enumerate_all(view));
    for (const auto& o : r.outcomes) CHECK(sim.max_delay[0] <= to_double(*o.bound) + sim.tolerance[0]);
  }
  GeneratorConfig cfg;
  cfg.servers = {3, 5};
  cfg.flows = {3, 6};
  cfg.path_length = {1, 3};
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    cfg.seed = seed;
    auto net = generate(cfg);
    auto sim = simulate_fifo(net);
    for (std::size_t f = 0; f < net.flows.size(); ++f) {
      auto plain = analyze_plain(net, f, AnalysisOptions{});
      CHECK(sim.max_delay[f] <= to_double(plain.objective_value) + sim.tolerance[f]);
    }
  }
}
