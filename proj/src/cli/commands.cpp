#include "fpnc/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <mutex>
#include <thread>

#include "fpnc/errors.hpp"
#include "fpnc/gnn/importance.hpp"
#include "fpnc/gnn/policy.hpp"
#include "fpnc/netmodel/network_io.hpp"
#include "fpnc/prolong/prolong.hpp"

namespace fpnc {

namespace fs = std::filesystem;

namespace {

std::uint64_t fnv1a(const std::string& text, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

AnalysisOptions options_for(const AnalyzeSpec& spec) {
  AnalysisOptions o;
  o.grid_refine = spec.theta_grid;
  o.timeout_seconds = spec.timeout_seconds;
  if (spec.memory_cap_mb) o.memory_cap_bytes = *spec.memory_cap_mb * 1024 * 1024;
  return o;
}

Rational path_latency(const ServerGraph& net, std::size_t flow) {
  Rational sum = 0;
  for (auto s : net.flows[flow].path) sum += net.servers[s].latency;
  return sum;
}

std::optional<Rational> output_burst(const ServerGraph& net, std::size_t flow, AnalysisOptions options) {
  options.objective = Objective::output;
  auto r = analyze_feedforward(net, flow, MethodConfig{}, options);
  if (!r.success) return std::nullopt;
  return r.objective_value;
}

MetricsRecord analyze_flow(const NamedNetwork& item, std::size_t flow, const AnalyzeSpec& spec, const Predictor& predictor) {
  const auto& net = item.net;
  const auto options = options_for(spec);
  MetricsRecord rec;
  rec.network = item.name;
  rec.foi = net.flows[flow].id;
  rec.method = to_string(spec.method);
  rec.k = method_uses_k(spec.method) ? spec.k : 1;
  rec.servers = net.servers.size();
  rec.flows = net.flows.size();
  const auto view = tandem_view(net, flow);
  rec.prolongable = prolongable_count(view);

  MethodConfig method;
  method.kind = spec.method;
  method.k = rec.k;
  method.seed = fnv1a(rec.foi, fnv1a(rec.network, spec.seed));
  method.predictor = predictor;
  auto result = analyze_feedforward(net, flow, method, options);
  rec.success = result.success;
  rec.failure = result.failure;
  rec.wall_seconds = result.wall_seconds;
  rec.explored = result.explored;
  if (!result.success) return rec;
  rec.delay_bound = result.objective_value;

  AnalysisResult fifo = result;
  if (spec.method != MethodKind::ludb_ff) fifo = analyze_feedforward(net, flow, MethodConfig{}, options);
  if (!fifo.success || fifo.objective_value <= 0) return rec;
  rec.fifo_bound = fifo.objective_value;
  rec.gap = delay_gap(*rec.fifo_bound, *rec.delay_bound);
  // The path latency cancels in the difference of the variable parts.
  const Rational fixed = path_latency(net, flow);
  rec.latency_improvement = Rational(((*rec.fifo_bound - fixed) - (*rec.delay_bound - fixed)) / *rec.fifo_bound);

  auto fifo_burst = output_burst(net, flow, options);
  auto method_net = result.best_alternative ? apply_prolongation(net, view, *result.best_alternative) : net;
  auto method_burst = spec.method == MethodKind::ludb_ff ? fifo_burst : output_burst(method_net, flow, options);
  if (fifo_burst && method_burst && *fifo_burst > 0) {
    const Rational own = net.flows[flow].burst;
    rec.burstiness_improvement = Rational(((*fifo_burst - own) - (*method_burst - own)) / *fifo_burst);
  }
  return rec;
}

std::size_t worker_count(std::size_t requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

template <class F>
void parallel_for(std::size_t n, std::size_t workers, F&& body) {
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  workers = std::min(workers, std::max<std::size_t>(n, 1));
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<TrainInstance> training_instances(const std::vector<NamedNetwork>& nets, std::size_t limit) {
  std::vector<TrainInstance> out;
  for (const auto& item : nets)
    for (std::size_t f = 0; f < item.net.flows.size() && out.size() < limit; ++f)
      if (prolongable_count(tandem_view(item.net, f)) > 0) out.push_back({item.net, f});
  return out;
}

TopologyKind kind_of(const GenerateSpec& spec, std::size_t i) {
  static constexpr TopologyKind kinds[] = {TopologyKind::tandem, TopologyKind::tree, TopologyKind::erdos_renyi};
  return spec.kind ? *spec.kind : kinds[i % 3];
}

std::vector<NamedNetwork> generated(const GenerateSpec& spec) {
  std::vector<NamedNetwork> out;
  for (std::size_t i = 0; i < spec.count; ++i) {
    GeneratorConfig cfg;
    cfg.kind = kind_of(spec, i);
    cfg.servers = spec.servers;
    cfg.flows = spec.flows;
    cfg.path_length = spec.path_length;
    cfg.seed = spec.seed + i;
    std::ostringstream name;
    name << "net-" << std::setw(4) << std::setfill('0') << i;
    out.push_back({name.str(), generate(cfg)});
  }
  return out;
}

}  // namespace

std::vector<NamedNetwork> load_dataset(const fs::path& path) {
  std::vector<NamedNetwork> out;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path))
      if (entry.is_regular_file() && entry.path().extension() == ".net") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) out.push_back({f.stem().string(), read_network_file(f)});
  } else if (fs::is_regular_file(path)) {
    out.push_back({path.stem().string(), read_network_file(path)});
  } else {
    throw UsageError("no such dataset: " + path.string());
  }
  return out;
}

std::shared_ptr<const ModelParams> load_model(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open checkpoint " + path.string());
  std::string magic;
  std::getline(in, magic);
  in.seekg(0);
  if (magic.rfind("fpnc-train", 0) == 0) return std::make_shared<const ModelParams>(read_train_state(in).params);
  return std::make_shared<const ModelParams>(read_params(in));
}

int cmd_generate(const GenerateSpec& spec, std::ostream& err) {
  auto nets = generated(spec);
  fs::create_directories(spec.out);
  std::ofstream manifest(spec.out / "manifest.tsv");
  manifest << "file\tkind\tseed\tservers\tflows\n";
  for (std::size_t i = 0; i < nets.size(); ++i) {
    write_network_file(spec.out / (nets[i].name + ".net"), nets[i].net);
    manifest << nets[i].name << ".net\t" << to_string(kind_of(spec, i)) << '\t' << spec.seed + i << '\t'
             << nets[i].net.servers.size() << '\t' << nets[i].net.flows.size() << '\n';
  }
  err << "wrote " << nets.size() << " networks to " << spec.out.string() << '\n';
  return kExitOk;
}

std::vector<MetricsRecord> analyze_dataset(const AnalyzeSpec& spec) {
  if (spec.k == 0) throw UsageError("--k must be at least 1");
  std::vector<NamedNetwork> nets;
  for (const auto& p : spec.inputs)
    for (auto& n : load_dataset(p)) nets.push_back(std::move(n));
  for (const auto& n : nets)
    if (auto problems = validate(n.net); !problems.empty()) throw UsageError(n.name + ": " + problems.front());

  Predictor predictor;
  if (spec.method == MethodKind::deepfp) {
    if (!spec.checkpoint) throw UsageError("deepfp needs --checkpoint");
    predictor = make_gnn_predictor(load_model(*spec.checkpoint));
  }

  std::vector<std::pair<std::size_t, std::size_t>> tasks;
  for (std::size_t i = 0; i < nets.size(); ++i) {
    if (spec.foi_only) {
      auto foi = nets[i].net.foi_index();
      if (!foi) throw UsageError(nets[i].name + " names no flow of interest");
      tasks.emplace_back(i, *foi);
    } else {
      for (std::size_t f = 0; f < nets[i].net.flows.size(); ++f) tasks.emplace_back(i, f);
    }
  }
  std::vector<MetricsRecord> rows(tasks.size());
  parallel_for(tasks.size(), worker_count(spec.workers), [&](std::size_t t) {
    rows[t] = analyze_flow(nets[tasks[t].first], tasks[t].second, spec, predictor);
  });
  return rows;
}

int cmd_analyze(const AnalyzeSpec& spec, std::ostream& err) {
  auto rows = analyze_dataset(spec);
  write_metrics(spec.out, rows);
  auto failed = std::count_if(rows.begin(), rows.end(), [](const MetricsRecord& r) { return !r.success; });
  err << rows.size() << " flows analysed, " << failed << " failed\n";
  return failed ? kExitPartial : kExitOk;
}

int cmd_train(const TrainSpec& spec, std::ostream& err) {
  auto nets = spec.in ? load_dataset(*spec.in) : generated(spec.generate);
  auto pool = training_instances(nets, spec.max_instances);
  if (pool.empty()) throw UsageError("no flow with prolongation options in the training data");

  TrainConfig cfg = spec.config;
  cfg.checkpoint_path = spec.checkpoint.string();
  if (cfg.checkpoint_every == 0) cfg.checkpoint_every = 100;
  const bool resume = fs::exists(spec.checkpoint);
  TrainState state = resume ? load_train_state(spec.checkpoint.string()) : initial_state(cfg);
  if (state.params.hidden != cfg.hidden) throw UsageError("checkpoint hidden size differs from --hidden");
  if (resume) err << "resuming from episode " << state.episode << '\n';

  std::ofstream log;
  TrainHooks hooks;
  if (spec.log) {
    const bool append = resume && fs::exists(*spec.log);
    log.open(*spec.log, append ? std::ios::app : std::ios::trunc);
    if (!log) throw UsageError("cannot write " + spec.log->string());
    hooks.on_episode = log_writer(log, !append);
  }
  state = train(cfg, pool, std::move(state), hooks);
  if (spec.model_out) save_params(spec.model_out->string(), state.params);
  err << "trained " << state.episode << " episodes on " << pool.size() << " flows, " << state.skipped << " skipped\n";
  return kExitOk;
}

int cmd_evaluate(const EvaluateSpec& spec, std::ostream& out, std::ostream& err) {
  std::vector<MetricsRecord> rows;
  for (const auto& p : spec.inputs)
    for (auto& r : read_metrics(p)) rows.push_back(std::move(r));
  auto report = summarize(rows);
  auto text = format_report(report);
  if (spec.out) {
    std::ofstream file(*spec.out);
    if (!file) throw UsageError("cannot write " + spec.out->string());
    file << text;
  } else {
    out << text;
  }
  if (report.common_flows < report.all_flows)
    err << "gaps restricted to " << report.common_flows << " of " << report.all_flows << " flows\n";
  return kExitOk;
}

const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> names{"is-server", "is-flow", "is-prolongation", "rate", "latency-or-burst",
                                              "order-or-hop", "foi-flag", "pad7", "pad8", "pad9", "pad10", "pad11",
                                              "pad12"};
  return names;
}

int cmd_importance(const ImportanceSpec& spec, std::ostream& out, std::ostream& err) {
  auto params = load_model(spec.checkpoint);
  AnalysisOptions options;
  options.timeout_seconds = spec.timeout_seconds;
  std::vector<std::pair<ServerGraph, std::size_t>> items;
  for (const auto& t : training_instances(load_dataset(spec.in), spec.max_instances)) items.emplace_back(t.net, t.foi);
  // Instances whose reference analysis fails are left out.
  std::vector<ImportanceInstance> set;
  for (const auto& item : items) {
    try {
      auto one = prepare_importance_set({item}, options);
      set.push_back(std::move(one.front()));
    } catch (const std::runtime_error&) {
    }
  }
  if (set.empty()) throw UsageError("no usable instances for the importance study");

  std::vector<std::pair<double, std::size_t>> ranked;
  for (std::size_t f = 0; f < params->features; ++f)
    ranked.emplace_back(to_double(permutation_importance(set, *params, f, spec.seed, std::nullopt, options)), f);
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

  std::ostringstream text;
  text << "# " << set.size() << " flows\nrank\tfeature\tname\tgap_difference\n";
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    auto f = ranked[i].second;
    text << i + 1 << '\t' << f << '\t' << (f < feature_names().size() ? feature_names()[f] : "?") << '\t'
         << ranked[i].first << '\n';
  }
  if (spec.out) {
    std::ofstream file(*spec.out);
    if (!file) throw UsageError("cannot write " + spec.out->string());
    file << text.str();
  } else {
    out << text.str();
  }
  err << "importance over " << set.size() << " flows\n";
  return kExitOk;
}

}  // namespace fpnc
