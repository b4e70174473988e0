#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fpnc/gnn/graph.hpp"
#include "fpnc/gnn/model.hpp"
#include "fpnc/ludb/analysis.hpp"

namespace fpnc {

/// Linear decay from `start` to `end` over the first `decay_fraction` of training.
struct EpsilonSchedule {
  double start = 0.5;
  double end = 0.05;
  double decay_fraction = 0.5;

  double at(std::size_t episode, std::size_t episodes) const;
};

struct TrainConfig {
  double learning_rate = 0.01;
  std::size_t episodes = 2000;
  EpsilonSchedule epsilon;
  /// Curriculum phases over difficulty-sorted instances.
  std::size_t phases = 4;
  std::uint64_t seed = 0;
  std::size_t hidden = 32;
  std::optional<std::size_t> iterations;
  /// Subtract a moving average of rewards before the update.
  bool baseline = false;
  double baseline_decay = 0.9;
  std::size_t checkpoint_every = 0;
  std::string checkpoint_path;
  std::size_t eval_every = 0;
  AnalysisOptions analysis;
};

struct TrainInstance {
  ServerGraph net;
  std::size_t foi = 0;
};

struct TrainState {
  ModelParams params;
  std::size_t episode = 0;
  std::size_t skipped = 0;
  double baseline = 0;
  std::mt19937_64 rng;

  bool operator==(const TrainState& other) const;
};

/// (fifo - fp) / fifo; throws UsageError when fifo <= 0.
double compute_reward(const Rational& fifo, const Rational& fp);

/// With probability epsilon every group is drawn uniformly, otherwise from the policy.
std::vector<std::size_t> sample_action(const PolicyOutput& policy, double epsilon, std::mt19937_64& rng);

/// Gradient ascent on reward * log pi(actions). Returns false, leaving params
/// untouched, when the gradient is not finite.
bool reinforce_step(ModelParams& params, const AnalysisGraph& g, const std::vector<std::size_t>& actions, double reward,
                    double learning_rate, std::optional<std::size_t> iterations = std::nullopt);

/// Foi path length times the number of prolongable cross-flows.
std::size_t difficulty(const TandemView& view);

/// Instance indices split into `phases` consecutive groups of nondecreasing difficulty.
std::vector<std::vector<std::size_t>> curriculum_phases(const std::vector<std::size_t>& difficulties, std::size_t phases);

/// Training checkpoint: "fpnc-train 1" header, counters, baseline (hex float),
/// the rng state line, then the model in write_params format.
void write_train_state(std::ostream& out, const TrainState& state);
TrainState read_train_state(std::istream& in);
void save_train_state(const std::string& path, const TrainState& state);
TrainState load_train_state(const std::string& path);

struct EpisodeRecord {
  std::size_t episode = 0;
  std::size_t difficulty = 0;
  double reward = 0;
  Rational fifo_bound;
  Rational fp_bound;
  double epsilon = 0;
  bool skipped = false;
  std::string failure;
};

struct TrainHooks {
  std::function<void(const EpisodeRecord&)> on_episode;
  std::function<void(const TrainState&)> on_eval;
};

/// Runs episodes from state.episode up to cfg.episodes. Starting from
/// initial_state(cfg), or from a checkpoint of the same run, gives identical results.
TrainState train(const TrainConfig& cfg, const std::vector<TrainInstance>& pool, TrainState state,
                 const TrainHooks& hooks = {});

TrainState initial_state(const TrainConfig& cfg);

/// Tab-separated log writer: optional header line, then one line per episode.
std::function<void(const EpisodeRecord&)> log_writer(std::ostream& out, bool header = true);

}  // namespace fpnc
