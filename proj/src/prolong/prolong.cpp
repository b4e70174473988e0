#include "fpnc/prolong/prolong.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "fpnc/errors.hpp"

namespace fpnc {

std::string to_string(AlternativeSource source) {
  switch (source) {
    case AlternativeSource::exhaustive: return "exhaustive";
    case AlternativeSource::hfp: return "hfp";
    case AlternativeSource::random: return "random";
    case AlternativeSource::deepfp: return "deepfp";
    case AlternativeSource::manual: return "manual";
  }
  return "manual";
}

std::vector<ProlongChoice> prolongation_choices(const TandemView& view) {
  std::vector<ProlongChoice> out;
  for (std::size_t i = 0; i < view.crossings.size(); ++i) {
    const auto& c = view.crossings[i];
    if (!c.ends_at_sink) continue;
    ProlongChoice choice{c.flow, i, {}};
    for (std::size_t e = c.last; e < view.size(); ++e) choice.exits.push_back(e);
    out.push_back(std::move(choice));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.flow < b.flow; });
  return out;
}

std::size_t prolongable_count(const TandemView& view) {
  std::size_t n = 0;
  for (const auto& c : prolongation_choices(view))
    if (c.exits.size() > 1) ++n;
  return n;
}

ProlongationAssignment identity_assignment(const TandemView& view) {
  ProlongationAssignment a;
  for (const auto& c : prolongation_choices(view)) a.exits[c.flow] = c.exits.front();
  return a;
}

Rational exhaustive_count(const TandemView& view) {
  Rational n = 1;
  for (const auto& c : prolongation_choices(view)) n *= static_cast<long>(c.exits.size());
  return n;
}

void for_each_assignment(const TandemView& view,
                         const std::function<bool(const ProlongationAssignment&)>& visit) {
  const auto choices = prolongation_choices(view);
  std::vector<std::size_t> idx(choices.size(), 0);
  ProlongationAssignment a = identity_assignment(view);
  for (;;) {
    if (!visit(a)) return;
    // Last flow varies fastest, giving lexicographic order in flow order.
    std::size_t i = choices.size();
    while (i > 0) {
      --i;
      if (++idx[i] < choices[i].exits.size()) {
        a.exits[choices[i].flow] = choices[i].exits[idx[i]];
        break;
      }
      idx[i] = 0;
      a.exits[choices[i].flow] = choices[i].exits[0];
      if (i == 0) return;
    }
    if (choices.empty()) return;
  }
}

AlternativeSet enumerate_all(const TandemView& view, std::size_t limit) {
  if (exhaustive_count(view) > Rational(static_cast<long>(limit)))
    throw UsageError("exhaustive prolongation pool exceeds " + std::to_string(limit));
  AlternativeSet out;
  out.source = AlternativeSource::exhaustive;
  for_each_assignment(view, [&](const ProlongationAssignment& a) {
    out.items.push_back(a);
    return true;
  });
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> interleaved_patterns(const TandemView& view) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < view.crossings.size(); ++i)
    for (std::size_t j = i + 1; j < view.crossings.size(); ++j)
      if (interleaved(view.crossings[i], view.crossings[j])) out.emplace_back(i, j);
  return out;
}

AlternativeSet hfp_alternatives(const TandemView& view, HfpReading reading, Budget* budget) {
  using Move = std::map<std::size_t, std::size_t>;
  std::vector<Move> moves;
  for (const auto& [i, j] : interleaved_patterns(view)) {
    const auto& a = view.crossings[i];
    const auto& b = view.crossings[j];
    std::size_t target = std::max(a.last, b.last);
    if (reading == HfpReading::overlapping)
      for (const auto& c : view.crossings) {
        const bool overlaps_a = c.first <= a.last && a.first <= c.last;
        const bool overlaps_b = c.first <= b.last && b.first <= c.last;
        if (overlaps_a || overlaps_b) target = std::max(target, c.last);
      }
    Move move;
    for (const Crossing* c : {&a, &b})
      if (c->ends_at_sink && c->last < target) move[c->flow] = target;
    if (!move.empty() && std::find(moves.begin(), moves.end(), move) == moves.end()) moves.push_back(move);
  }
  AlternativeSet out;
  out.source = AlternativeSource::hfp;
  std::set<ProlongationAssignment> seen;
  out.items.push_back(identity_assignment(view));
  seen.insert(out.items.front());
  // Closing under one move at a time yields the subset-mask order without visiting duplicates.
  for (const auto& move : moves) {
    const std::size_t before = out.items.size();
    for (std::size_t i = 0; i < before; ++i) {
      if (budget) {
        budget->check();
        budget->charge(64 * (out.items[i].exits.size() + 1));
      }
      ProlongationAssignment a = out.items[i];
      for (const auto& [flow, exit] : move) a.exits[flow] = std::max(a.exits[flow], exit);
      if (seen.insert(a).second) out.items.push_back(std::move(a));
      if (out.items.size() > kHfpPoolLimit) throw UsageError("hFP pool exceeds " + std::to_string(kHfpPoolLimit));
    }
  }
  return out;
}

bool hfp_readings_differ(const TandemView& view) {
  return hfp_alternatives(view, HfpReading::involved).items !=
         hfp_alternatives(view, HfpReading::overlapping).items;
}

AlternativeSet random_select(const AlternativeSet& pool, std::size_t k, std::uint64_t seed) {
  if (k == 0) throw UsageError("k must be positive");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(pool.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  AlternativeSet out;
  out.source = AlternativeSource::random;
  for (std::size_t i = 0; i < std::min(k, order.size()); ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, order.size() - 1);
    std::swap(order[i], order[pick(rng)]);
    out.items.push_back(pool.items[order[i]]);
  }
  return out;
}

AlternativeSet random_exhaustive_select(const TandemView& view, std::size_t k, std::uint64_t seed) {
  if (k == 0) throw UsageError("k must be positive");
  const Rational total = exhaustive_count(view);
  if (total <= Rational(1'000'000)) {
    auto out = random_select(enumerate_all(view), k, seed);
    return out;
  }
  // Pool too large to list: draw tuples uniformly and reject repeats.
  std::mt19937_64 rng(seed);
  const auto choices = prolongation_choices(view);
  AlternativeSet out;
  out.source = AlternativeSource::random;
  std::set<ProlongationAssignment> seen;
  while (out.items.size() < k) {
    ProlongationAssignment a;
    for (const auto& c : choices) {
      std::uniform_int_distribution<std::size_t> pick(0, c.exits.size() - 1);
      a.exits[c.flow] = c.exits[pick(rng)];
    }
    if (seen.insert(a).second) out.items.push_back(std::move(a));
  }
  return out;
}

ServerGraph apply_prolongation(const ServerGraph& net, const TandemView& view,
                               const ProlongationAssignment& assignment) {
  ServerGraph out = net;
  for (const auto& [flow, exit] : assignment.exits) {
    auto it = std::find_if(view.crossings.begin(), view.crossings.end(),
                           [&](const Crossing& c) { return c.flow == flow && c.ends_at_sink; });
    if (it == view.crossings.end()) throw UsageError("flow " + net.flows.at(flow).id + " cannot be prolonged");
    if (exit < it->last || exit >= view.size()) throw UsageError("exit outside the foi path");
    for (std::size_t p = it->last + 1; p <= exit; ++p) out.flows[flow].path.push_back(view.servers[p]);
  }
  return out;
}

bool prolongation_stable(const ServerGraph& net, const TandemView& view, const ProlongationAssignment& assignment) {
  std::vector<Rational> load(net.servers.size());
  for (const auto& f : net.flows)
    for (auto s : f.path) load[s] += f.rate;
  for (const auto& [flow, exit] : assignment.exits) {
    auto it = std::find_if(view.crossings.begin(), view.crossings.end(),
                           [&](const Crossing& c) { return c.flow == flow && c.ends_at_sink; });
    if (it == view.crossings.end()) continue;
    for (std::size_t p = it->last + 1; p <= exit && p < view.size(); ++p) load[view.servers[p]] += net.flows[flow].rate;
  }
  for (std::size_t s = 0; s < net.servers.size(); ++s)
    if (load[s] >= net.servers[s].rate) return false;
  return true;
}

EvaluationResult evaluate_alternatives(const ServerGraph& net, std::size_t foi, const AlternativeSet& alts,
                                       const AnalysisOptions& options, Budget* budget) {
  if (alts.items.empty()) throw UsageError("no alternatives to evaluate");
  const auto view = tandem_view(net, foi);
  EvaluationResult out;
  bool any = false;
  for (std::size_t i = 0; i < alts.items.size(); ++i) {
    if (budget) budget->check();
    AlternativeOutcome outcome;
    try {
      auto result = analyze_plain(apply_prolongation(net, view, alts.items[i]), foi, options, budget);
      outcome.bound = result.objective_value;
      if (!any || result.objective_value < out.best_result.objective_value) {
        any = true;
        out.best_index = i;
        out.best = alts.items[i];
        out.best_result = std::move(result);
      }
    } catch (const InstabilityError& e) {
      outcome.failure = e.what();
    } catch (const AnalysisError& e) {
      outcome.failure = e.what();
    } catch (const DomainError& e) {
      outcome.failure = e.what();
    }
    out.outcomes.push_back(std::move(outcome));
  }
  if (!any) throw AnalysisError("all prolongation alternatives failed");
  out.best_result.explored = alts.items.size();
  out.best_result.best_alternative = out.best;
  return out;
}

std::string dump_alternatives(const ServerGraph& net, const TandemView& view, const AlternativeSet& alts) {
  std::string out;
  for (const auto& a : alts.items) {
    std::string line;
    for (const auto& [flow, exit] : a.exits) {
      if (!line.empty()) line += ' ';
      line += net.flows[flow].id + "->" + net.servers[view.servers[exit]].id;
    }
    out += line + '\n';
  }
  return out;
}

}  // namespace fpnc
