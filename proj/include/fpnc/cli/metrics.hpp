#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fpnc/rational.hpp"

namespace fpnc {

/// One analysed (network, flow, method) triple.
///
/// The metrics file holds everything but wall time, so reruns reproduce it byte
/// for byte; wall times go to a "<file>.timing" sidecar.
struct MetricsRecord {
  std::string network;
  std::string foi;
  std::string method;
  std::size_t k = 1;
  std::size_t servers = 0;
  std::size_t flows = 0;
  std::size_t prolongable = 0;
  bool success = false;
  std::optional<Rational> delay_bound;
  std::optional<Rational> fifo_bound;
  /// (fifo - delay) / fifo
  std::optional<Rational> gap;
  /// Reduction of the delay bound's variable part (bound minus path latencies),
  /// divided by the LUDB-FF delay bound.
  std::optional<Rational> latency_improvement;
  /// Same for the output burstiness minus the flow's own burst, divided by the
  /// LUDB-FF output burstiness.
  std::optional<Rational> burstiness_improvement;
  std::size_t explored = 0;
  std::string failure;
  double wall_seconds = 0;

  /// "rnd-fp(4)" for methods with a budget, else the method name.
  std::string method_label() const;
};

/// (fifo - bound) / fifo; throws UsageError when fifo <= 0.
Rational delay_gap(const Rational& fifo, const Rational& bound);

std::string metrics_header();
std::string format_metrics_row(const MetricsRecord& r);
std::string timing_header();
std::string format_timing_row(const MetricsRecord& r);

std::filesystem::path timing_path(const std::filesystem::path& metrics);
void write_metrics(const std::filesystem::path& path, const std::vector<MetricsRecord>& rows);
/// Reads a metrics file and, when present, its timing sidecar.
std::vector<MetricsRecord> read_metrics(const std::filesystem::path& path);

struct MethodSummary {
  std::string method;
  std::size_t rows = 0;
  std::size_t successes = 0;
  /// Over the flows every method analysed successfully.
  double mean_gap = 0;
  double median_gap = 0;
  double p10_gap = 0;
  double p90_gap = 0;
  double negative_share = 0;
  double median_seconds = 0;
  double p90_seconds = 0;
  /// Gap quantiles at 0, 0.05, ..., 1.
  std::vector<double> gap_cdf;
  /// Success ratio keyed by the network's flow count.
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> success_by_flows;
};

struct EvaluationReport {
  std::vector<MethodSummary> methods;
  std::size_t common_flows = 0;
  std::size_t all_flows = 0;
};

EvaluationReport summarize(const std::vector<MetricsRecord>& rows);
std::string format_report(const EvaluationReport& report);

}  // namespace fpnc
