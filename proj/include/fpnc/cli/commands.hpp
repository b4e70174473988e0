#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fpnc/cli/metrics.hpp"
#include "fpnc/gnn/model.hpp"
#include "fpnc/ludb/method.hpp"
#include "fpnc/netmodel/generator.hpp"
#include "fpnc/train/reinforce.hpp"

namespace fpnc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitPartial = 2;

struct NamedNetwork {
  std::string name;
  ServerGraph net;
};

/// A ".net" file, or every ".net" file of a directory in name order.
std::vector<NamedNetwork> load_dataset(const std::filesystem::path& path);

/// Model parameters from a model file or a training checkpoint.
std::shared_ptr<const ModelParams> load_model(const std::filesystem::path& path);

struct GenerateSpec {
  std::filesystem::path out;
  std::size_t count = 10;
  std::uint64_t seed = 0;
  /// Unset: tandem, tree and Erdos-Renyi in turn.
  std::optional<TopologyKind> kind;
  IntRange servers{5, 15};
  IntRange flows{12, 40};
  IntRange path_length{3, 6};
};

/// Writes net-NNNN.net files and a manifest.tsv; network i uses seed + i.
int cmd_generate(const GenerateSpec& spec, std::ostream& err);

struct AnalyzeSpec {
  std::vector<std::filesystem::path> inputs;
  MethodKind method = MethodKind::ludb_ff;
  std::size_t k = 1;
  std::uint64_t seed = 0;
  std::optional<double> timeout_seconds;
  std::optional<std::size_t> memory_cap_mb;
  std::size_t workers = 1;
  std::optional<std::filesystem::path> checkpoint;
  std::filesystem::path out;
  bool theta_grid = false;
  /// Only the flow named in each network's FOI section.
  bool foi_only = false;
};

/// One metrics row per flow, in input order.
std::vector<MetricsRecord> analyze_dataset(const AnalyzeSpec& spec);
int cmd_analyze(const AnalyzeSpec& spec, std::ostream& err);

struct TrainSpec {
  std::optional<std::filesystem::path> in;
  /// Without an input dataset, this many networks are generated.
  GenerateSpec generate;
  TrainConfig config;
  std::filesystem::path checkpoint;
  std::optional<std::filesystem::path> log;
  /// Final model parameters, loadable by analyze --checkpoint.
  std::optional<std::filesystem::path> model_out;
  std::size_t max_instances = 1000;
};

/// Resumes from spec.checkpoint when it exists.
int cmd_train(const TrainSpec& spec, std::ostream& err);

struct EvaluateSpec {
  std::vector<std::filesystem::path> inputs;
  std::optional<std::filesystem::path> out;
};

int cmd_evaluate(const EvaluateSpec& spec, std::ostream& out, std::ostream& err);

struct ImportanceSpec {
  std::filesystem::path in;
  std::filesystem::path checkpoint;
  std::uint64_t seed = 0;
  std::size_t max_instances = 50;
  std::optional<std::filesystem::path> out;
  std::optional<double> timeout_seconds;
};

int cmd_importance(const ImportanceSpec& spec, std::ostream& out, std::ostream& err);

/// Names of the input features, in feature order.
const std::vector<std::string>& feature_names();

}  // namespace fpnc
