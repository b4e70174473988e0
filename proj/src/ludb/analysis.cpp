#include "fpnc/ludb/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>

#include "fpnc/errors.hpp"

namespace fpnc {

namespace {

std::vector<std::size_t> member_flows(const NestingNode& node, const std::vector<Crossing>& crossings) {
  std::vector<std::size_t> flows;
  for (std::size_t m : node.members) flows.push_back(crossings[m].flow);
  std::sort(flows.begin(), flows.end());
  flows.erase(std::unique(flows.begin(), flows.end()), flows.end());
  return flows;
}

CutSet choose_cuts(const std::vector<Crossing>& crossings, std::size_t size) {
  auto sets = enumerate_cut_sets(crossings, size, 64);
  if (sets.empty()) return {};
  return *std::min_element(sets.begin(), sets.end(), [](const CutSet& a, const CutSet& b) {
    return a.cuts.size() < b.cuts.size();
  });
}

TermPtr arrival_at(TermContext& ctx, std::vector<std::size_t> flows, std::size_t server);

TermPtr bound_output(TermContext& ctx, const std::vector<std::size_t>& group, std::size_t last_server) {
  const auto& net = ctx.network();
  std::vector<std::size_t> path{last_server};
  for (;;) {
    std::optional<std::size_t> previous;
    bool common = true;
    for (std::size_t f : group) {
      const auto& p = net.flows[f].path;
      auto pos = ServerGraph::position_on_path(net.flows[f], path.front());
      if (!pos || *pos == 0) {
        common = false;
        break;
      }
      if (previous && *previous != p[*pos - 1]) {
        common = false;
        break;
      }
      previous = p[*pos - 1];
    }
    if (!common || !previous) break;
    path.insert(path.begin(), *previous);
  }
  TermPtr input = arrival_at(ctx, group, path.front());
  TermPtr service = analyze_cut_tandem(path, group, choose_cuts(crossings_on(net, path, group), path.size()), ctx);
  return ctx.deconvolve(input, service);
}

TermPtr arrival_at(TermContext& ctx, std::vector<std::size_t> flows, std::size_t server) {
  std::sort(flows.begin(), flows.end());
  auto key = std::make_pair(flows, server);
  if (auto it = ctx.arrival_memo.find(key); it != ctx.arrival_memo.end()) return it->second;

  const auto& net = ctx.network();
  std::vector<TermPtr> parts;
  std::map<std::size_t, std::vector<std::size_t>> by_predecessor;
  for (std::size_t f : flows) {
    auto pos = ServerGraph::position_on_path(net.flows[f], server);
    if (!pos) throw AnalysisError("flow " + net.flows[f].id + " does not cross " + net.servers[server].id);
    if (*pos == 0)
      parts.push_back(ctx.source(f));
    else
      by_predecessor[net.flows[f].path[*pos - 1]].push_back(f);
  }
  for (const auto& [pred, group] : by_predecessor) parts.push_back(bound_output(ctx, group, pred));

  TermPtr result = ctx.aggregate(std::move(parts));
  ctx.arrival_memo.emplace(std::move(key), result);
  return result;
}

std::optional<Rational> try_evaluate(const TermPtr& term, const ServerGraph& net, const Assignment& a,
                                     const TokenBucket& arrival, Objective objective) {
  try {
    return concrete_objective(evaluate_service(term, net, a), arrival, objective);
  } catch (const InstabilityError&) {
    return std::nullopt;
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

}  // namespace

TermPtr compile_nested_term(const NestingNode& node, const std::vector<Crossing>& crossings,
                            const std::vector<std::size_t>& servers, TermContext& ctx) {
  std::vector<TermPtr> parts;
  std::size_t pos = node.first;
  for (const auto& child : node.children) {
    for (; pos < child.first; ++pos) parts.push_back(ctx.server(servers[pos]));
    parts.push_back(compile_nested_term(child, crossings, servers, ctx));
    pos = child.last + 1;
  }
  for (; pos <= node.last; ++pos) parts.push_back(ctx.server(servers[pos]));
  TermPtr service = ctx.convolve(std::move(parts));
  if (node.members.empty()) return service;
  return ctx.leftover(service, arrival_at(ctx, member_flows(node, crossings), servers[node.first]));
}

TermPtr analyze_cut_tandem(const std::vector<std::size_t>& servers,
                           const std::vector<std::size_t>& analysed, const CutSet& cuts,
                           TermContext& ctx) {
  const auto crossings = crossings_on(ctx.network(), servers, analysed);
  std::vector<TermPtr> parts;
  for (const auto& [first, last] : split_by_cuts(servers.size(), cuts)) {
    auto local = clip_crossings(crossings, first, last);
    for (auto& c : local) {
      c.first -= first;
      c.last -= first;
    }
    std::vector<std::size_t> local_servers(servers.begin() + static_cast<std::ptrdiff_t>(first),
                                           servers.begin() + static_cast<std::ptrdiff_t>(last + 1));
    auto tree = build_nesting_tree(local, local_servers.size());
    if (!std::holds_alternative<NestingTree>(tree)) throw AnalysisError("sub-tandem is not nested");
    parts.push_back(compile_nested_term(std::get<NestingTree>(tree).root, local, local_servers, ctx));
  }
  return ctx.convolve(std::move(parts));
}

TermPtr analyze_cut_tandem(const TandemView& view, const CutSet& cuts, TermContext& ctx) {
  return analyze_cut_tandem(view.servers, {view.foi}, cuts, ctx);
}

std::vector<CutSet> candidate_cut_sets(const TandemView& view, bool all_subsets) {
  if (all_subsets) return enumerate_all_cut_subsets(view.crossings, view.size());
  auto sets = enumerate_cut_sets(view);
  if (sets.empty()) sets.push_back(CutSet{});
  return sets;
}

CompiledTerm compile_foi_term(const ServerGraph& net, std::size_t foi, const CutSet& cuts, Budget* budget) {
  CompiledTerm out;
  out.cuts = cuts;
  out.context = std::make_shared<TermContext>(net, budget);
  out.service = analyze_cut_tandem(net.flows.at(foi).path, {foi}, cuts, *out.context);
  out.foi_arrival = net.flows[foi].arrival();
  return out;
}

LinearProgram delay_program(const PseudoAffineCurve& term, const TokenBucket& foi_arrival,
                            const ConstraintSet& constraints, const std::vector<ThetaId>& thetas,
                            Objective objective) {
  LinearProgram lp;
  lp.variables = thetas;
  lp.constraints = constraints.items;
  if (objective == Objective::output) {
    lp.objective = vdev(foi_arrival, term);
    return lp;
  }
  DelayExpr d = hdev(foi_arrival, term);
  lp.objective = d.base;
  if (!d.max_terms.empty()) {
    std::uint32_t top = 0;
    for (auto t : thetas) top = std::max(top, t.value);
    const ThetaId z{top + 1};
    lp.variables.push_back(z);
    lp.objective += AffineExpr::variable(z);
    for (const auto& m : d.max_terms) lp.constraints.push_back(AffineExpr::variable(z) - m);
  }
  return lp;
}

ThetaOptimum optimize_delay(const PseudoAffineCurve& term, const TokenBucket& foi_arrival,
                            const ConstraintSet& constraints, const std::vector<ThetaId>& thetas,
                            Objective objective, Budget* budget) {
  const auto lp = delay_program(term, foi_arrival, constraints, thetas, objective);
  const auto sol = solve(lp, budget);
  if (sol.status != LpStatus::optimal) throw AnalysisError("empty theta domain");
  ThetaOptimum out;
  for (auto t : thetas) out.thetas[t] = sol.assignment.at(t);
  out.bound = concrete_objective(term.substitute(out.thetas), foi_arrival, objective);
  return out;
}

Rational concrete_objective(const PseudoAffineCurve& curve, const TokenBucket& foi_arrival,
                            Objective objective) {
  if (objective == Objective::output) return vdev(foi_arrival, curve).evaluate({});
  return hdev(foi_arrival, curve).evaluate({});
}

Rational default_theta_upper(const ServerGraph& net) {
  Rational latency = 0, bursts = 0;
  std::optional<Rational> min_rate;
  for (const auto& s : net.servers) {
    latency += s.latency;
    if (!min_rate || s.rate < *min_rate) min_rate = s.rate;
  }
  for (const auto& f : net.flows) bursts += f.burst;
  Rational upper = latency;
  if (min_rate) upper += 10 * bursts / *min_rate;
  return upper > 0 ? upper : Rational(1);
}

ThetaOptimum theta_grid_refine(const TermPtr& term, const ServerGraph& net,
                               const std::vector<ThetaId>& thetas, const TokenBucket& foi_arrival,
                               const GridSpec& grid, Objective objective,
                               std::optional<ThetaOptimum> start, Budget* budget) {
  std::optional<ThetaOptimum> best = start;
  auto consider = [&](const Assignment& a) {
    if (budget) budget->check();
    auto v = try_evaluate(term, net, a, foi_arrival, objective);
    if (v && (!best || *v < best->bound)) best = ThetaOptimum{*v, a};
  };

  const std::size_t k = thetas.size();
  if (k == 0) {
    consider({});
    if (!best) throw AnalysisError("term cannot be evaluated");
    return *best;
  }
  const std::size_t points = std::max<std::size_t>(grid.points, 2);
  const Rational base_upper = grid.upper ? *grid.upper : default_theta_upper(net);
  std::vector<Rational> lo(k, Rational(0)), hi(k, base_upper);
  if (start)
    for (std::size_t i = 0; i < k; ++i)
      if (auto it = start->thetas.find(thetas[i]); it != start->thetas.end() && 2 * it->second > hi[i])
        hi[i] = 2 * it->second;

  bool full = true;
  {
    double total = 1;
    for (std::size_t i = 0; i < k; ++i) total *= static_cast<double>(points);
    full = total <= static_cast<double>(grid.full_grid_limit);
  }

  for (std::size_t level = 0; level <= grid.zoom_levels; ++level) {
    std::vector<Rational> step(k);
    for (std::size_t i = 0; i < k; ++i) step[i] = (hi[i] - lo[i]) / static_cast<long>(points - 1);
    auto value_at = [&](std::size_t i, std::size_t j) -> Rational { return lo[i] + step[i] * static_cast<long>(j); };

    if (full) {
      std::vector<std::size_t> idx(k, 0);
      for (;;) {
        Assignment a;
        for (std::size_t i = 0; i < k; ++i) a[thetas[i]] = value_at(i, idx[i]);
        consider(a);
        std::size_t i = 0;
        while (i < k && ++idx[i] == points) idx[i++] = 0;
        if (i == k) break;
      }
    } else {
      Assignment current;
      for (std::size_t i = 0; i < k; ++i) {
        Rational v = (lo[i] + hi[i]) / 2;
        if (best)
          if (auto it = best->thetas.find(thetas[i]); it != best->thetas.end()) v = it->second;
        current[thetas[i]] = v;
      }
      consider(current);
      for (int sweep = 0; sweep < 3; ++sweep) {
        const auto before = best ? std::optional<Rational>(best->bound) : std::nullopt;
        for (std::size_t i = 0; i < k; ++i) {
          Assignment probe = best ? best->thetas : current;
          for (std::size_t j = 0; j < points; ++j) {
            probe[thetas[i]] = value_at(i, j);
            consider(probe);
          }
        }
        if (before && best && !(best->bound < *before)) break;
      }
    }
    if (!best) break;
    for (std::size_t i = 0; i < k; ++i) {
      auto it = best->thetas.find(thetas[i]);
      const Rational c = it != best->thetas.end() ? it->second : (lo[i] + hi[i]) / 2;
      lo[i] = c - step[i] < 0 ? Rational(0) : c - step[i];
      hi[i] = c + step[i];
    }
  }
  if (!best) throw AnalysisError("no theta grid point yields a bound");
  return *best;
}

ThetaOptimum bound_term(const CompiledTerm& term, const ServerGraph& net, const AnalysisOptions& options,
                        Budget* budget) {
  std::optional<ThetaOptimum> lp;
  const auto& ctx = *term.context;
  try {
    lp = optimize_delay(term.service->service, term.foi_arrival, ctx.constraints(), ctx.thetas(),
                        options.objective, budget);
  } catch (const AnalysisError&) {
  }
  if (lp && !options.grid_refine) return *lp;
  return theta_grid_refine(term.service, net, ctx.thetas(), term.foi_arrival, options.grid,
                           options.objective, lp, budget);
}

AnalysisResult analyze_plain(const ServerGraph& net, std::size_t foi, const AnalysisOptions& options,
                             Budget* budget) {
  const auto started = std::chrono::steady_clock::now();
  const auto view = tandem_view(net, foi);
  const auto cut_sets = candidate_cut_sets(view, options.all_cut_subsets);

  std::optional<ThetaOptimum> best;
  std::optional<CompiledTerm> best_term;
  for (const auto& cuts : cut_sets) {
    auto term = compile_foi_term(net, foi, cuts, budget);
    auto opt = bound_term(term, net, options, budget);
    if (!best || opt.bound < best->bound) {
      best = opt;
      best_term = std::move(term);
    }
  }

  AnalysisResult result;
  const auto curve = evaluate_service(best_term->service, net, best->thetas);
  result.success = true;
  result.objective_value = concrete_objective(curve, best_term->foi_arrival, options.objective);
  result.delay_bound = concrete_objective(curve, best_term->foi_arrival, Objective::delay);
  result.output = tb_deconvolve(best_term->foi_arrival, curve);
  result.explored = 1;
  result.cut_sets = cut_sets.size();
  result.method = to_string(MethodKind::ludb_ff);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace fpnc
