#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fpnc/gnn/graph.hpp"

namespace fpnc {

/// Weights of the message-passing policy network.
///
/// GRU gates are stacked in the order update (z), reset (r), candidate (n):
///   z = sig(Wi_z x + Wh_z h + b_z), r = sig(Wi_r x + Wh_r h + b_r),
///   n = tanh(Wi_n x + r * (Wh_n h)), h' = (1 - z) * n + z * h.
/// Only z and r carry a bias.
struct ModelParams {
  std::size_t features = kFeatureWidth;
  std::size_t hidden = 32;

  Eigen::MatrixXd init_w;  // H x F
  Eigen::VectorXd init_b;  // H
  Eigen::MatrixXd msg_w;   // H x H
  Eigen::MatrixXd gru_wi;  // 3H x H
  Eigen::MatrixXd gru_wh;  // 3H x H
  Eigen::VectorXd gru_bz;  // H
  Eigen::VectorXd gru_br;  // H
  Eigen::MatrixXd edge_w1; // H x 2H
  Eigen::VectorXd edge_b1; // H
  Eigen::RowVectorXd edge_w2;  // 1 x H
  double edge_b2 = 0;
  Eigen::MatrixXd out_w1;  // H x H
  Eigen::VectorXd out_b1;  // H
  Eigen::RowVectorXd out_w2;   // 1 x H
  double out_b2 = 0;

  static ModelParams zeros(std::size_t features, std::size_t hidden);
  /// Glorot-uniform weights, zero biases.
  static ModelParams random(std::size_t features, std::size_t hidden, std::uint64_t seed);

  std::size_t parameter_count() const;
  /// All parameters in checkpoint order (matrices row-major).
  std::vector<double> flatten() const;
  void assign(const std::vector<double>& values);

  bool operator==(const ModelParams& other) const { return features == other.features && hidden == other.hidden && flatten() == other.flatten(); }
};

using GradientSet = ModelParams;

/// Checkpoint format: a text line "fpnc-gnn 1 <F> <H>\n", then flatten() as
/// little-endian float64.
void write_params(std::ostream& out, const ModelParams& params);
ModelParams read_params(std::istream& in);
void save_params(const std::string& path, const ModelParams& params);
ModelParams load_params(const std::string& path);

struct PolicyOutput {
  /// Per choice group of the graph: readout scores and their softmax.
  std::vector<std::vector<double>> scores;
  std::vector<std::vector<double>> probabilities;
};

/// Runs `iterations` rounds of message passing (default: graph diameter).
PolicyOutput forward(const AnalysisGraph& g, const ModelParams& params, std::optional<std::size_t> iterations = std::nullopt);

/// Node embeddings after the last round, H x node count.
Eigen::MatrixXd embeddings(const AnalysisGraph& g, const ModelParams& params, std::optional<std::size_t> iterations = std::nullopt);

/// weight * sum over groups of log pi(actions[i]).
double log_probability(const PolicyOutput& policy, const std::vector<std::size_t>& actions);

/// Gradient of weight * log pi(actions) with respect to every parameter.
GradientSet backward(const AnalysisGraph& g, const ModelParams& params, const std::vector<std::size_t>& actions, double weight,
                     std::optional<std::size_t> iterations = std::nullopt);

/// params += scale * grad
void add_scaled(ModelParams& params, const GradientSet& grad, double scale);
bool all_finite(const GradientSet& grad);

}  // namespace fpnc
