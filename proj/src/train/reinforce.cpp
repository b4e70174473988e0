#include "fpnc/train/reinforce.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "fpnc/budget.hpp"
#include "fpnc/errors.hpp"
#include "fpnc/prolong/prolong.hpp"

namespace fpnc {

double EpsilonSchedule::at(std::size_t episode, std::size_t episodes) const {
  const double span = decay_fraction * static_cast<double>(episodes);
  if (span <= 0 || static_cast<double>(episode) >= span) return end;
  return start + (end - start) * static_cast<double>(episode) / span;
}

bool TrainState::operator==(const TrainState& other) const {
  return params == other.params && episode == other.episode && skipped == other.skipped && baseline == other.baseline &&
         rng == other.rng;
}

double compute_reward(const Rational& fifo, const Rational& fp) {
  if (fifo <= 0) throw UsageError("reward needs a positive FIFO bound");
  return to_double(Rational((fifo - fp) / fifo));
}

std::vector<std::size_t> sample_action(const PolicyOutput& policy, double epsilon, std::mt19937_64& rng) {
  if (!(epsilon >= 0 && epsilon <= 1)) throw UsageError("epsilon must lie in [0, 1]");
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const bool explore = coin(rng) < epsilon;
  std::vector<std::size_t> actions;
  for (const auto& dist : policy.probabilities) {
    if (explore) {
      actions.push_back(std::uniform_int_distribution<std::size_t>(0, dist.size() - 1)(rng));
      continue;
    }
    // Inverse CDF; the last choice absorbs rounding.
    double u = coin(rng), acc = 0;
    std::size_t pick = dist.size() - 1;
    for (std::size_t j = 0; j < dist.size(); ++j) {
      acc += dist[j];
      if (u < acc) {
        pick = j;
        break;
      }
    }
    actions.push_back(pick);
  }
  return actions;
}

bool reinforce_step(ModelParams& params, const AnalysisGraph& g, const std::vector<std::size_t>& actions, double reward,
                    double learning_rate, std::optional<std::size_t> iterations) {
  if (!std::isfinite(reward)) return false;
  if (reward == 0 || g.groups.empty()) return true;
  auto grad = backward(g, params, actions, reward, iterations);
  if (!all_finite(grad)) return false;
  add_scaled(params, grad, learning_rate);
  return true;
}

std::size_t difficulty(const TandemView& view) { return view.size() * prolongable_count(view); }

std::vector<std::vector<std::size_t>> curriculum_phases(const std::vector<std::size_t>& difficulties, std::size_t phases) {
  if (phases == 0) throw UsageError("at least one curriculum phase is required");
  std::vector<std::size_t> order(difficulties.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return difficulties[a] < difficulties[b]; });
  std::vector<std::vector<std::size_t>> out(phases);
  for (std::size_t i = 0; i < order.size(); ++i) out[i * phases / order.size()].push_back(order[i]);
  // With fewer instances than phases some groups are empty; reuse the previous one.
  for (std::size_t p = 1; p < phases; ++p)
    if (out[p].empty()) out[p] = out[p - 1];
  return out;
}

void write_train_state(std::ostream& out, const TrainState& state) {
  out << "fpnc-train 1\n";
  out << "episode " << state.episode << "\nskipped " << state.skipped << "\n";
  out << "baseline " << std::hexfloat << state.baseline << std::defaultfloat << "\n";
  out << "rng " << state.rng << "\n";
  write_params(out, state.params);
}

TrainState read_train_state(std::istream& in) {
  TrainState state;
  std::string line, key;
  if (!std::getline(in, line) || line != "fpnc-train 1") throw UsageError("not a training checkpoint");
  auto field = [&](const std::string& expected) {
    if (!std::getline(in, line)) throw UsageError("truncated training checkpoint");
    auto space = line.find(' ');
    if (line.substr(0, space) != expected) throw UsageError("expected " + expected + " in training checkpoint");
    return line.substr(space + 1);
  };
  state.episode = std::stoul(field("episode"));
  state.skipped = std::stoul(field("skipped"));
  state.baseline = std::strtod(field("baseline").c_str(), nullptr);
  std::istringstream rng(field("rng"));
  rng >> state.rng;
  if (!rng) throw UsageError("bad rng state in training checkpoint");
  state.params = read_params(in);
  return state;
}

void save_train_state(const std::string& path, const TrainState& state) {
  // Write then rename so an interrupted save keeps the previous checkpoint.
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw UsageError("cannot open " + tmp + " for writing");
    write_train_state(out, state);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw UsageError("cannot replace " + path);
}

TrainState load_train_state(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open training checkpoint " + path);
  return read_train_state(in);
}

TrainState initial_state(const TrainConfig& cfg) {
  TrainState state;
  state.params = ModelParams::random(kFeatureWidth, cfg.hidden, cfg.seed);
  state.rng.seed(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  return state;
}

TrainState train(const TrainConfig& cfg, const std::vector<TrainInstance>& pool, TrainState state, const TrainHooks& hooks) {
  if (!(cfg.learning_rate >= 0)) throw UsageError("learning rate must be nonnegative");
  if (pool.empty()) throw UsageError("empty training pool");

  std::vector<TandemView> views;
  std::vector<AnalysisGraph> graphs;
  std::vector<std::size_t> difficulties;
  for (const auto& inst : pool) {
    views.push_back(tandem_view(inst.net, inst.foi));
    graphs.push_back(transform_graph(inst.net, inst.foi, views.back()));
    difficulties.push_back(difficulty(views.back()));
  }
  const auto phases = curriculum_phases(difficulties, cfg.phases);

  // Bounds are deterministic, so caching them does not change the run.
  std::map<std::size_t, Rational> fifo_cache;
  std::map<std::pair<std::size_t, ProlongationAssignment>, Rational> fp_cache;
  auto bound_of = [&](std::size_t i, const ProlongationAssignment& a) {
    auto key = std::make_pair(i, a);
    if (auto it = fp_cache.find(key); it != fp_cache.end()) return it->second;
    Budget budget(cfg.analysis.timeout_seconds, cfg.analysis.memory_cap_bytes);
    auto r = analyze_plain(apply_prolongation(pool[i].net, views[i], a), pool[i].foi, cfg.analysis, &budget);
    if (!r.success) throw AnalysisError(r.failure);
    return fp_cache[key] = r.objective_value;
  };

  for (; state.episode < cfg.episodes; ++state.episode) {
    const std::size_t e = state.episode;
    const auto& phase = phases[std::min(cfg.phases - 1, e * cfg.phases / cfg.episodes)];
    const std::size_t i = phase[std::uniform_int_distribution<std::size_t>(0, phase.size() - 1)(state.rng)];
    EpisodeRecord rec;
    rec.episode = e;
    rec.difficulty = difficulties[i];
    rec.epsilon = cfg.epsilon.at(e, cfg.episodes);

    auto policy = forward(graphs[i], state.params, cfg.iterations);
    auto actions = sample_action(policy, rec.epsilon, state.rng);
    try {
      if (!fifo_cache.count(i)) fifo_cache[i] = bound_of(i, identity_assignment(views[i]));
      rec.fifo_bound = fifo_cache[i];
      rec.fp_bound = bound_of(i, assignment_from_choices(graphs[i], actions));
      rec.reward = compute_reward(rec.fifo_bound, rec.fp_bound);
    } catch (const std::exception& ex) {
      rec.skipped = true;
      rec.failure = ex.what();
    }

    if (!rec.skipped) {
      double advantage = rec.reward;
      if (cfg.baseline) {
        advantage -= state.baseline;
        state.baseline = cfg.baseline_decay * state.baseline + (1 - cfg.baseline_decay) * rec.reward;
      }
      if (!reinforce_step(state.params, graphs[i], actions, advantage, cfg.learning_rate, cfg.iterations)) {
        rec.skipped = true;
        rec.failure = "non-finite gradient";
      }
    }
    if (rec.skipped) ++state.skipped;
    if (hooks.on_episode) hooks.on_episode(rec);

    const std::size_t done = e + 1;
    if (cfg.checkpoint_every && !cfg.checkpoint_path.empty() && done % cfg.checkpoint_every == 0) {
      auto snapshot = state;
      snapshot.episode = done;
      save_train_state(cfg.checkpoint_path, snapshot);
    }
    if (cfg.eval_every && hooks.on_eval && done % cfg.eval_every == 0) {
      auto snapshot = state;
      snapshot.episode = done;
      hooks.on_eval(snapshot);
    }
  }
  if (!cfg.checkpoint_path.empty()) save_train_state(cfg.checkpoint_path, state);
  return state;
}

std::function<void(const EpisodeRecord&)> log_writer(std::ostream& out, bool header) {
  if (header) out << "episode\tdifficulty\treward\tfifo_bound\tfp_bound\tepsilon\tstatus\n";
  return [&out](const EpisodeRecord& r) {
    out << r.episode << '\t' << r.difficulty << '\t' << r.reward << '\t' << r.fifo_bound << '\t' << r.fp_bound << '\t'
        << r.epsilon << '\t' << (r.skipped ? "skipped: " + r.failure : std::string("ok")) << '\n';
  };
}

}  // namespace fpnc
