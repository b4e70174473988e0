#include <CLI11.hpp>

#include <iostream>

#include "fpnc/cli/commands.hpp"
#include "fpnc/errors.hpp"

namespace {

fpnc::IntRange parse_range(const std::string& text) {
  auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      auto v = std::stoul(text);
      return {v, v};
    }
    return {std::stoul(text.substr(0, colon)), std::stoul(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw fpnc::UsageError("bad range '" + text + "', expected MIN:MAX");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delay bounds for feedforward FIFO networks with flow prolongation"};
  app.require_subcommand(1);

  fpnc::GenerateSpec gen;
  std::string kind = "mixed", servers = "5:15", flows = "12:40", path = "3:6";
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "Generate a random network dataset");
  generate->add_option("--out", gen_out, "Output directory")->required();
  generate->add_option("--count", gen.count, "Number of networks");
  generate->add_option("--seed", gen.seed, "Seed of the first network");
  generate->add_option("--kind", kind, "tandem | tree | erdos-renyi | mixed");
  generate->add_option("--servers", servers, "Server count range MIN:MAX");
  generate->add_option("--flows", flows, "Flow count range MIN:MAX");
  generate->add_option("--path", path, "Path length range MIN:MAX");

  fpnc::AnalyzeSpec an;
  std::vector<std::string> an_in;
  std::string method = "ludb-ff", an_out, an_checkpoint;
  double timeout = 0;
  std::size_t mem_cap = 0;
  auto* analyze = app.add_subcommand("analyze", "Bound every flow of a dataset with one method");
  analyze->add_option("--in", an_in, "Network file or dataset directory")->required();
  analyze->add_option("--method", method, "ludb-ff | fp-exhaustive | fp-heuristic | rnd-fp | rnd-hfp | deepfp");
  analyze->add_option("--k", an.k, "Alternatives explored by rnd-fp, rnd-hfp and deepfp");
  analyze->add_option("--seed", an.seed, "Seed for random selection");
  analyze->add_option("--timeout-s", timeout, "Per-flow time limit in seconds (0: none)");
  analyze->add_option("--mem-cap-mb", mem_cap, "Per-flow allocation cap in MiB (0: none)");
  analyze->add_option("--workers", an.workers, "Worker threads (0: one per core)");
  analyze->add_option("--checkpoint", an_checkpoint, "Model for deepfp");
  analyze->add_option("--out", an_out, "Metrics file")->required();
  analyze->add_flag("--theta-grid", an.theta_grid, "Always refine theta on a grid");
  analyze->add_flag("--foi-only", an.foi_only, "Only the flow named in each network's FOI section");

  fpnc::TrainSpec tr;
  std::string tr_in, tr_checkpoint, tr_log, tr_model, tr_kind = "mixed";
  auto* train = app.add_subcommand("train", "Train the prolongation policy");
  train->add_option("--in", tr_in, "Training dataset (default: generate one)");
  train->add_option("--count", tr.generate.count, "Networks to generate without --in");
  train->add_option("--kind", tr_kind, "tandem | tree | erdos-renyi | mixed");
  train->add_option("--seed", tr.config.seed, "Seed for initialization, sampling and generation");
  train->add_option("--episodes", tr.config.episodes, "Training episodes");
  train->add_option("--hidden", tr.config.hidden, "Hidden width");
  train->add_option("--lr", tr.config.learning_rate, "Learning rate");
  train->add_option("--max-instances", tr.max_instances, "Cap on training flows");
  train->add_option("--checkpoint-every", tr.config.checkpoint_every, "Episodes between checkpoints");
  train->add_flag("--baseline", tr.config.baseline, "Subtract a moving-average reward baseline");
  train->add_option("--timeout-s", timeout, "Per-analysis time limit in seconds (0: none)");
  train->add_option("--checkpoint", tr_checkpoint, "Training checkpoint, resumed when present")->required();
  train->add_option("--log", tr_log, "Per-episode training log");
  train->add_option("--out", tr_model, "Final model file");

  fpnc::EvaluateSpec ev;
  std::vector<std::string> ev_in;
  std::string ev_out;
  auto* evaluate = app.add_subcommand("evaluate", "Aggregate metrics files into a gap report");
  evaluate->add_option("--in", ev_in, "Metrics files")->required();
  evaluate->add_option("--out", ev_out, "Report file (default: stdout)");

  fpnc::ImportanceSpec im;
  std::string im_in, im_checkpoint, im_out;
  auto* importance = app.add_subcommand("importance", "Permutation feature importance of a model");
  importance->add_option("--in", im_in, "Dataset")->required();
  importance->add_option("--checkpoint", im_checkpoint, "Model")->required();
  importance->add_option("--seed", im.seed, "Shuffle seed");
  importance->add_option("--max-instances", im.max_instances, "Cap on evaluated flows");
  importance->add_option("--timeout-s", timeout, "Per-analysis time limit in seconds (0: none)");
  importance->add_option("--out", im_out, "Report file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? fpnc::kExitOk : fpnc::kExitUsage;
  }

  try {
    std::optional<double> limit;
    if (timeout > 0) limit = timeout;
    if (*generate) {
      gen.out = gen_out;
      if (kind != "mixed") gen.kind = fpnc::parse_topology_kind(kind);
      gen.servers = parse_range(servers);
      gen.flows = parse_range(flows);
      gen.path_length = parse_range(path);
      return fpnc::cmd_generate(gen, std::cerr);
    }
    if (*analyze) {
      for (const auto& p : an_in) an.inputs.emplace_back(p);
      an.method = fpnc::parse_method_kind(method);
      an.timeout_seconds = limit;
      if (mem_cap > 0) an.memory_cap_mb = mem_cap;
      if (!an_checkpoint.empty()) an.checkpoint = an_checkpoint;
      an.out = an_out;
      return fpnc::cmd_analyze(an, std::cerr);
    }
    if (*train) {
      if (!tr_in.empty()) tr.in = tr_in;
      if (tr_kind != "mixed") tr.generate.kind = fpnc::parse_topology_kind(tr_kind);
      tr.generate.seed = tr.config.seed;
      tr.config.analysis.timeout_seconds = limit;
      tr.checkpoint = tr_checkpoint;
      if (!tr_log.empty()) tr.log = tr_log;
      if (!tr_model.empty()) tr.model_out = tr_model;
      return fpnc::cmd_train(tr, std::cerr);
    }
    if (*evaluate) {
      for (const auto& p : ev_in) ev.inputs.emplace_back(p);
      if (!ev_out.empty()) ev.out = ev_out;
      return fpnc::cmd_evaluate(ev, std::cout, std::cerr);
    }
    if (*importance) {
      im.in = im_in;
      im.checkpoint = im_checkpoint;
      im.timeout_seconds = limit;
      if (!im_out.empty()) im.out = im_out;
      return fpnc::cmd_importance(im, std::cout, std::cerr);
    }
  } catch (const fpnc::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return fpnc::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return fpnc::kExitPartial;
  }
  return fpnc::kExitUsage;
}
