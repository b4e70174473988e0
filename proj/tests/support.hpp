#pragma once

#include <random>
#include <string>

#include "fpnc/netmodel/network.hpp"

namespace fpnc::testing {

/// The five-server example: foi s2..s5, f1 s1..s4, f2 s1..s3, f3 s3..s4; all
/// servers beta_{rate,latency}, all flows gamma_{flow_rate,burst}.
ServerGraph example_network(const Rational& rate, const Rational& latency, const Rational& flow_rate,
                            const Rational& burst);

/// Same network with f2 prolonged to s4.
ServerGraph example_network_prolonged(const Rational& rate, const Rational& latency,
                                      const Rational& flow_rate, const Rational& burst);

/// Tandem s1..sn with the given flows (server positions, 0-based, inclusive).
struct TandemFlow {
  std::string id;
  Rational rate;
  Rational burst;
  std::size_t first;
  std::size_t last;
};
ServerGraph tandem_network(std::size_t servers, const Rational& rate, const Rational& latency,
                           const std::vector<TandemFlow>& flows, const std::string& foi);

/// Uniform rational k/denominator with k in [lo, hi].
Rational random_rational(std::mt19937_64& rng, long lo, long hi, long denominator);

double relative_error(double a, double b);

}  // namespace fpnc::testing

namespace fpnc::testing {

/// The five-server example with random server rates (20-60), latencies (0-0.3),
/// bursts (0-1] and flow rates that keep every server below 0.9 utilization under
/// any prolongation.
ServerGraph randomized_example(std::mt19937_64& rng);

}  // namespace fpnc::testing
