#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "fpnc/budget.hpp"
#include "fpnc/minplus/curves.hpp"
#include "fpnc/netmodel/network.hpp"

namespace fpnc {

enum class TermKind { server, convolve, leftover, source, aggregate, deconvolve };

struct TermNode;
using TermPtr = std::shared_ptr<const TermNode>;

/// Node of a compiled (min,plus) term.
///
/// Service-valued kinds (server, convolve, leftover) carry their symbolic curve in
/// `service`; arrival-valued kinds (source, aggregate, deconvolve) carry `arrival`.
/// Children: convolve -> operands; leftover -> {service, cross arrival};
/// aggregate -> operands; deconvolve -> {arrival, service}.
struct TermNode {
  TermKind kind = TermKind::server;
  std::size_t index = 0;  // server or flow index
  ThetaId theta{};
  std::vector<TermPtr> children;
  PseudoAffineCurve service;
  TokenBucket arrival;

  bool is_service() const {
    return kind == TermKind::server || kind == TermKind::convolve || kind == TermKind::leftover;
  }
};

/// Builds term nodes for one analysis and owns its theta variables and constraints.
class TermContext {
 public:
  explicit TermContext(const ServerGraph& net, Budget* budget = nullptr)
      : net_(&net), budget_(budget) {}

  TermPtr server(std::size_t s);
  TermPtr convolve(std::vector<TermPtr> parts);
  /// Allocates a fresh theta.
  TermPtr leftover(TermPtr service, TermPtr cross);
  TermPtr source(std::size_t flow);
  TermPtr aggregate(std::vector<TermPtr> parts);
  TermPtr deconvolve(TermPtr arrival, TermPtr service);

  const std::vector<ThetaId>& thetas() const { return thetas_; }
  const ConstraintSet& constraints() const { return constraints_; }
  const ServerGraph& network() const { return *net_; }
  Budget* budget() const { return budget_; }

  /// Cached arrival bound of a flow set at the input of a server.
  std::map<std::pair<std::vector<std::size_t>, std::size_t>, TermPtr> arrival_memo;

 private:
  TermPtr make(TermNode node);

  const ServerGraph* net_;
  Budget* budget_;
  std::vector<ThetaId> thetas_;
  ConstraintSet constraints_;
};

/// Concrete service curve of a term at a theta assignment, using the exact
/// left-over (closure semantics) at every node.
PseudoAffineCurve evaluate_service(const TermPtr& term, const ServerGraph& net,
                                   const Assignment& thetas);
TokenBucket evaluate_arrival(const TermPtr& term, const ServerGraph& net, const Assignment& thetas);

/// Distinct theta variables referenced by the term.
std::vector<ThetaId> term_thetas(const TermPtr& term);

/// Algebraic rendering, e.g. "((b3 (x) b4) -[t1] a3)".
std::string to_string(const TermPtr& term, const ServerGraph& net);

}  // namespace fpnc
