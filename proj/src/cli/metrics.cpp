#include "fpnc/cli/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "fpnc/errors.hpp"

namespace fpnc {

namespace {

const std::vector<std::string> kColumns{"network", "foi", "method", "k", "servers", "flows", "prolongable",
                                        "success", "delay_bound", "fifo_bound", "gap", "latency_improvement",
                                        "burstiness_improvement", "explored", "failure"};

std::string cell(const std::optional<Rational>& v) { return v ? v->get_str() : "-"; }

std::optional<Rational> parse_cell(const std::string& s) {
  if (s == "-") return std::nullopt;
  return parse_rational(s);
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  return s.empty() ? "-" : s;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, '\t')) out.push_back(field);
  if (!line.empty() && line.back() == '\t') out.emplace_back();
  return out;
}

std::string row_key(const MetricsRecord& r) { return r.network + '\t' + r.foi + '\t' + r.method_label(); }

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return NAN;
  std::sort(v.begin(), v.end());
  return v[static_cast<std::size_t>(std::lround(q * static_cast<double>(v.size() - 1)))];
}

}  // namespace

std::string MetricsRecord::method_label() const {
  if (method == "rnd-fp" || method == "rnd-hfp" || method == "deepfp") return method + "(" + std::to_string(k) + ")";
  return method;
}

Rational delay_gap(const Rational& fifo, const Rational& bound) {
  if (fifo <= 0) throw UsageError("gap needs a positive reference bound");
  return Rational((fifo - bound) / fifo);
}

std::string metrics_header() {
  std::string out;
  for (const auto& c : kColumns) out += (out.empty() ? "" : "\t") + c;
  return out;
}

std::string format_metrics_row(const MetricsRecord& r) {
  std::ostringstream out;
  out << r.network << '\t' << r.foi << '\t' << r.method << '\t' << r.k << '\t' << r.servers << '\t' << r.flows << '\t'
      << r.prolongable << '\t' << (r.success ? 1 : 0) << '\t' << cell(r.delay_bound) << '\t' << cell(r.fifo_bound) << '\t'
      << cell(r.gap) << '\t' << cell(r.latency_improvement) << '\t' << cell(r.burstiness_improvement) << '\t'
      << r.explored << '\t' << (r.success ? "-" : sanitize(r.failure));
  return out.str();
}

std::string timing_header() { return "network\tfoi\tmethod\tk\twall_seconds"; }

std::string format_timing_row(const MetricsRecord& r) {
  std::ostringstream out;
  out << r.network << '\t' << r.foi << '\t' << r.method << '\t' << r.k << '\t' << std::setprecision(9) << r.wall_seconds;
  return out.str();
}

std::filesystem::path timing_path(const std::filesystem::path& metrics) {
  auto p = metrics;
  p += ".timing";
  return p;
}

void write_metrics(const std::filesystem::path& path, const std::vector<MetricsRecord>& rows) {
  std::ofstream out(path);
  std::ofstream timing(timing_path(path));
  if (!out || !timing) throw UsageError("cannot write " + path.string());
  out << metrics_header() << '\n';
  timing << timing_header() << '\n';
  for (const auto& r : rows) {
    out << format_metrics_row(r) << '\n';
    timing << format_timing_row(r) << '\n';
  }
}

std::vector<MetricsRecord> read_metrics(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read metrics file " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != metrics_header()) throw UsageError(path.string() + " is not a metrics file");
  std::vector<MetricsRecord> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto f = split_tabs(line);
    if (f.size() != kColumns.size())
      throw UsageError(path.string() + ":" + std::to_string(lineno) + ": expected " + std::to_string(kColumns.size()) +
                       " fields");
    MetricsRecord r;
    try {
      r.network = f[0];
      r.foi = f[1];
      r.method = f[2];
      r.k = std::stoul(f[3]);
      r.servers = std::stoul(f[4]);
      r.flows = std::stoul(f[5]);
      r.prolongable = std::stoul(f[6]);
      r.success = f[7] == "1";
      r.delay_bound = parse_cell(f[8]);
      r.fifo_bound = parse_cell(f[9]);
      r.gap = parse_cell(f[10]);
      r.latency_improvement = parse_cell(f[11]);
      r.burstiness_improvement = parse_cell(f[12]);
      r.explored = std::stoul(f[13]);
      r.failure = f[14] == "-" ? "" : f[14];
    } catch (const std::invalid_argument&) {
      throw UsageError(path.string() + ":" + std::to_string(lineno) + ": malformed field");
    }
    rows.push_back(std::move(r));
  }

  std::ifstream timing(timing_path(path));
  if (timing && std::getline(timing, line)) {
    std::map<std::string, double> seconds;
    while (std::getline(timing, line)) {
      auto f = split_tabs(line);
      if (f.size() != 5) continue;
      MetricsRecord key;
      key.network = f[0];
      key.foi = f[1];
      key.method = f[2];
      key.k = std::stoul(f[3]);
      seconds[row_key(key)] = std::stod(f[4]);
    }
    for (auto& r : rows)
      if (auto it = seconds.find(row_key(r)); it != seconds.end()) r.wall_seconds = it->second;
  }
  return rows;
}

EvaluationReport summarize(const std::vector<MetricsRecord>& rows) {
  EvaluationReport report;
  std::vector<std::string> labels;
  std::map<std::string, std::vector<const MetricsRecord*>> by_method;
  std::set<std::pair<std::string, std::string>> flows;
  for (const auto& r : rows) {
    auto label = r.method_label();
    if (!by_method.count(label)) labels.push_back(label);
    by_method[label].push_back(&r);
    flows.emplace(r.network, r.foi);
  }
  report.all_flows = flows.size();

  // Flows that every method analysed successfully.
  std::set<std::pair<std::string, std::string>> common = flows;
  for (const auto& label : labels) {
    std::set<std::pair<std::string, std::string>> ok;
    for (auto* r : by_method[label])
      if (r->success && r->gap) ok.emplace(r->network, r->foi);
    std::set<std::pair<std::string, std::string>> kept;
    std::set_intersection(common.begin(), common.end(), ok.begin(), ok.end(), std::inserter(kept, kept.begin()));
    common = std::move(kept);
  }
  report.common_flows = common.size();

  for (const auto& label : labels) {
    MethodSummary s;
    s.method = label;
    std::vector<double> gaps, seconds;
    for (auto* r : by_method[label]) {
      ++s.rows;
      s.successes += r->success;
      auto& bucket = s.success_by_flows[r->flows];
      bucket.first += r->success;
      ++bucket.second;
      seconds.push_back(r->wall_seconds);
      if (r->success && r->gap && common.count({r->network, r->foi})) gaps.push_back(to_double(*r->gap));
    }
    if (!gaps.empty()) {
      double sum = 0;
      std::size_t negative = 0;
      for (double g : gaps) {
        sum += g;
        negative += g < 0;
      }
      s.mean_gap = sum / static_cast<double>(gaps.size());
      s.negative_share = static_cast<double>(negative) / static_cast<double>(gaps.size());
      s.median_gap = quantile(gaps, 0.5);
      s.p10_gap = quantile(gaps, 0.1);
      s.p90_gap = quantile(gaps, 0.9);
      for (int i = 0; i <= 20; ++i) s.gap_cdf.push_back(quantile(gaps, i / 20.0));
    }
    s.median_seconds = quantile(seconds, 0.5);
    s.p90_seconds = quantile(seconds, 0.9);
    report.methods.push_back(std::move(s));
  }
  return report;
}

std::string format_report(const EvaluationReport& report) {
  std::ostringstream out;
  out << std::setprecision(6);
  out << "# flows analysed by every method: " << report.common_flows << " of " << report.all_flows << "\n";
  out << "method\trows\tsuccesses\tmean_gap\tmedian_gap\tp10_gap\tp90_gap\tnegative_share\tmedian_seconds\tp90_seconds\n";
  for (const auto& s : report.methods)
    out << s.method << '\t' << s.rows << '\t' << s.successes << '\t' << s.mean_gap << '\t' << s.median_gap << '\t'
        << s.p10_gap << '\t' << s.p90_gap << '\t' << s.negative_share << '\t' << s.median_seconds << '\t'
        << s.p90_seconds << '\n';
  out << "\n# gap quantiles\nmethod";
  for (int i = 0; i <= 20; ++i) out << "\tq" << std::setw(3) << std::setfill('0') << i * 5 << std::setfill(' ');
  out << '\n';
  for (const auto& s : report.methods) {
    out << s.method;
    for (double q : s.gap_cdf) out << '\t' << q;
    out << '\n';
  }
  out << "\n# success ratio by flow count\nmethod\tflows\tsuccesses\trows\n";
  for (const auto& s : report.methods)
    for (const auto& [n, c] : s.success_by_flows) out << s.method << '\t' << n << '\t' << c.first << '\t' << c.second << '\n';
  return out.str();
}

}  // namespace fpnc
