#include "fpnc/ludb/term.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "fpnc/errors.hpp"

namespace fpnc {

namespace {

constexpr std::size_t kNodeCharge = 512;

PseudoAffineCurve fold_convolve(const std::vector<TermPtr>& parts) {
  PseudoAffineCurve acc = PseudoAffineCurve::delay(AffineExpr{});
  for (const auto& p : parts) acc = prune_dominated(pa_convolve(acc, p->service));
  return acc;
}

struct Evaluator {
  const ServerGraph& net;
  const Assignment& thetas;
  std::unordered_map<const TermNode*, PseudoAffineCurve> services;
  std::unordered_map<const TermNode*, TokenBucket> arrivals;

  PseudoAffineCurve service(const TermPtr& t) {
    if (auto it = services.find(t.get()); it != services.end()) return it->second;
    PseudoAffineCurve out;
    switch (t->kind) {
      case TermKind::server:
        out = net.servers[t->index].service();
        break;
      case TermKind::convolve:
        out = PseudoAffineCurve::delay(AffineExpr{});
        for (const auto& c : t->children) out = prune_dominated(pa_convolve(out, service(c)));
        break;
      case TermKind::leftover: {
        auto it = thetas.find(t->theta);
        if (it == thetas.end()) throw DomainError("no value for " + AffineExpr::variable(t->theta).to_string());
        out = prune_dominated(fifo_leftover_exact(service(t->children[0]), arrival(t->children[1]), it->second));
        break;
      }
      default:
        throw UsageError("arrival term used as service");
    }
    services.emplace(t.get(), out);
    return out;
  }

  TokenBucket arrival(const TermPtr& t) {
    if (auto it = arrivals.find(t.get()); it != arrivals.end()) return it->second;
    TokenBucket out;
    switch (t->kind) {
      case TermKind::source:
        out = net.flows[t->index].arrival();
        break;
      case TermKind::aggregate: {
        std::vector<TokenBucket> parts;
        for (const auto& c : t->children) parts.push_back(arrival(c));
        out = tb_aggregate(parts);
        break;
      }
      case TermKind::deconvolve:
        out = tb_deconvolve(arrival(t->children[0]), service(t->children[1]));
        break;
      default:
        throw UsageError("service term used as arrival");
    }
    arrivals.emplace(t.get(), out);
    return out;
  }
};

}  // namespace

TermPtr TermContext::make(TermNode node) {
  if (budget_) {
    budget_->check();
    budget_->charge(kNodeCharge + 64 * (node.service.stages.size() + node.children.size()));
  }
  return std::make_shared<const TermNode>(std::move(node));
}

TermPtr TermContext::server(std::size_t s) {
  TermNode n;
  n.kind = TermKind::server;
  n.index = s;
  n.service = net_->servers.at(s).service();
  return make(std::move(n));
}

TermPtr TermContext::convolve(std::vector<TermPtr> parts) {
  if (parts.size() == 1) return parts.front();
  TermNode n;
  n.kind = TermKind::convolve;
  n.service = fold_convolve(parts);
  n.children = std::move(parts);
  return make(std::move(n));
}

TermPtr TermContext::leftover(TermPtr service, TermPtr cross) {
  const ThetaId theta{static_cast<std::uint32_t>(thetas_.size() + 1)};
  auto result = fifo_leftover(service->service, cross->arrival, theta);
  thetas_.push_back(theta);
  constraints_.append(result.constraints);
  TermNode n;
  n.kind = TermKind::leftover;
  n.theta = theta;
  n.service = prune_dominated(result.curve);
  n.children = {std::move(service), std::move(cross)};
  return make(std::move(n));
}

TermPtr TermContext::source(std::size_t flow) {
  TermNode n;
  n.kind = TermKind::source;
  n.index = flow;
  n.arrival = net_->flows.at(flow).arrival();
  return make(std::move(n));
}

TermPtr TermContext::aggregate(std::vector<TermPtr> parts) {
  if (parts.size() == 1) return parts.front();
  std::vector<TokenBucket> buckets;
  for (const auto& p : parts) buckets.push_back(p->arrival);
  TermNode n;
  n.kind = TermKind::aggregate;
  n.arrival = tb_aggregate(buckets);
  n.children = std::move(parts);
  return make(std::move(n));
}

TermPtr TermContext::deconvolve(TermPtr arrival, TermPtr service) {
  TermNode n;
  n.kind = TermKind::deconvolve;
  n.arrival = tb_deconvolve(arrival->arrival, service->service);
  n.children = {std::move(arrival), std::move(service)};
  return make(std::move(n));
}

PseudoAffineCurve evaluate_service(const TermPtr& term, const ServerGraph& net,
                                   const Assignment& thetas) {
  Evaluator ev{net, thetas, {}, {}};
  return ev.service(term);
}

TokenBucket evaluate_arrival(const TermPtr& term, const ServerGraph& net, const Assignment& thetas) {
  Evaluator ev{net, thetas, {}, {}};
  return ev.arrival(term);
}

std::vector<ThetaId> term_thetas(const TermPtr& term) {
  std::set<ThetaId> seen;
  std::set<const TermNode*> visited;
  auto walk = [&](auto&& self, const TermPtr& t) -> void {
    if (!visited.insert(t.get()).second) return;
    if (t->kind == TermKind::leftover) seen.insert(t->theta);
    for (const auto& c : t->children) self(self, c);
  };
  walk(walk, term);
  return {seen.begin(), seen.end()};
}

std::string to_string(const TermPtr& t, const ServerGraph& net) {
  auto join = [&](const char* op) {
    std::string out = "(";
    for (std::size_t i = 0; i < t->children.size(); ++i) {
      if (i) out += op;
      out += to_string(t->children[i], net);
    }
    return out + ")";
  };
  switch (t->kind) {
    case TermKind::server:
      return "b[" + net.servers[t->index].id + "]";
    case TermKind::source:
      return "a[" + net.flows[t->index].id + "]";
    case TermKind::convolve:
      return join(" (x) ");
    case TermKind::aggregate:
      return join(" + ");
    case TermKind::leftover:
      return "(" + to_string(t->children[0], net) + " -[t" + std::to_string(t->theta.value) + "] " +
             to_string(t->children[1], net) + ")";
    case TermKind::deconvolve:
      return "(" + to_string(t->children[0], net) + " / " + to_string(t->children[1], net) + ")";
  }
  return {};
}

}  // namespace fpnc
