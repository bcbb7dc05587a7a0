#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "graphcr/error.h"
#include "graphcr/experiment.h"
#include "graphcr/http_api.h"
#include "graphcr/io.h"
#include "graphcr/oracle.h"
#include "graphcr/pipeline.h"
#include "graphcr/session.h"
#include "graphcr/synthetic.h"
#include "httplib.h"

namespace fs = std::filesystem;
using namespace graphcr;

namespace {

struct DataFlags {
  std::string records;
  std::string edges;
  std::string gold;
};

void AddDataFlags(CLI::App* cmd, DataFlags& flags, bool gold_required) {
  cmd->add_option("--records", flags.records, "records CSV")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--edges", flags.edges, "edges CSV")
      ->required()
      ->check(CLI::ExistingFile);
  auto* gold = cmd->add_option("--gold", flags.gold, "gold standard CSV")
                   ->check(CLI::ExistingFile);
  if (gold_required) gold->required();
}

const std::map<std::string, Strategy> kStrategies = {
    {"bootstrap", Strategy::kBootstrap},
    {"bootstrap-ext", Strategy::kBootstrapExt}};

struct RunFlags {
  DataFlags data;
  std::string replay;
  int budget = 0;
  int iter_budget = 20;
  int k = 100;
  Strategy strategy = Strategy::kBootstrapExt;
  uint64_t seed = 42;
  double noise = 0.0;
  double threshold = 0.0;
  std::string out;
};

int Run(const RunFlags& f) {
  if (f.data.gold.empty() && f.replay.empty()) {
    std::cerr << "run: --gold is required unless --replay supplies the "
                 "labels\n";
    return 2;
  }
  const Dataset dataset = LoadDataset(f.data.records, f.data.edges,
                                      f.data.gold);
  PipelineConfig config;
  config.selection = {f.budget, f.iter_budget, f.strategy, f.k, f.seed};
  config.selection.Validate();
  config.prepare = {f.threshold, f.noise, NoiseSeed(f.seed)};

  std::unique_ptr<Oracle> oracle;
  if (!f.replay.empty()) {
    oracle = std::make_unique<ReplayOracle>(LoadReplay(f.replay));
  } else {
    oracle = std::make_unique<GoldOracle>(*dataset.gold);
  }
  const PipelineResult result = RunPipeline(dataset.graph, *oracle, config);

  ExperimentCell cell;
  cell.dataset = dataset.name;
  cell.budget = f.budget;
  cell.strategy = f.strategy;
  cell.noise_ratio = f.noise;
  cell.threshold = f.threshold;
  cell.repetitions = 1;
  nlohmann::ordered_json report;
  if (dataset.gold) {
    const QualityReport q = PairwisePrf(result.repair.clusters, *dataset.gold);
    cell.precision = q.precision;
    cell.recall = q.recall;
    cell.f1 = q.f1;
    cell.baseline_f1 =
        PairwisePrf(ComponentPartition(result.prepared.input), *dataset.gold)
            .f1;
    cell.runs = {q};
    cell.baseline_runs = {cell.baseline_f1};
    cell.seeds = {f.seed};
    report = ReportJson(cell);
  } else {
    report = ReportJson(cell);
    for (const char* key : {"precision", "recall", "f1", "baseline_f1"}) {
      report[key] = nullptr;
    }
  }
  report["labels_used"] = result.learning.training.size();
  report["iterations"] = result.learning.iterations;
  report["initial_clusters"] = result.prepared.clusters.size();
  report["repaired_clusters"] = result.repair.clusters.size();

  const fs::path out(f.out);
  fs::create_directories(out);
  WriteClusters(out / "clusters.csv", result.repair.clusters);
  WriteFileAtomic(out / "report.jsonl", report.dump() + "\n");
  std::ostringstream audit;
  WriteAudit(audit, result.learning.audit);
  WriteFileAtomic(out / "audit.jsonl", audit.str());
  std::ostringstream model;
  result.learning.model.Serialize(model);
  WriteFileAtomic(out / "model.txt", model.str());

  std::cout << report.dump() << "\n";
  return 0;
}

struct ExperimentFlags {
  DataFlags data;
  ExperimentGrid grid;
  std::vector<std::string> strategies = {"bootstrap", "bootstrap-ext"};
  std::string out;
};

int Experiment(ExperimentFlags& f) {
  const Dataset dataset = LoadDataset(f.data.records, f.data.edges,
                                      f.data.gold);
  f.grid.strategies.clear();
  for (const std::string& s : f.strategies) {
    f.grid.strategies.push_back(ParseStrategy(s));
  }
  const std::vector<ExperimentCell> cells = RunExperiment(dataset, f.grid);
  std::ostringstream report;
  WriteReport(report, cells);
  if (!f.out.empty()) {
    fs::create_directories(f.out);
    WriteFileAtomic(fs::path(f.out) / "report.jsonl", report.str());
  }
  std::cout << report.str();
  return 0;
}

int Generate(const SyntheticConfig& config, const std::string& out_dir) {
  const Dataset data = GenerateSynthetic(config);
  const fs::path out(out_dir);
  fs::create_directories(out);
  std::ostringstream records, edges, gold;
  WriteRecords(records, data.records);
  WriteEdges(edges, data.graph);
  WriteGold(gold, *data.gold);
  WriteFileAtomic(out / "records.csv", records.str());
  WriteFileAtomic(out / "edges.csv", edges.str());
  WriteFileAtomic(out / "gold.csv", gold.str());
  std::cout << data.records.size() << " records, " << data.graph.num_edges()
            << " edges\n";
  return 0;
}

int Features(const DataFlags& data, double threshold, const std::string& out) {
  const Dataset dataset = LoadDataset(data.records, data.edges);
  const PreparedGraph prepared = PrepareGraph(dataset.graph, {threshold});
  if (out.empty()) {
    WriteFeatureMatrix(std::cout, prepared.features);
    return 0;
  }
  std::ostringstream matrix;
  WriteFeatureMatrix(matrix, prepared.features);
  WriteFileAtomic(out, matrix.str());
  return 0;
}

httplib::Server* g_server = nullptr;

void StopServer(int) {
  if (g_server != nullptr) g_server->stop();
}

int Serve(const std::string& host, int port, std::string state_dir) {
  if (state_dir.empty()) {
    const char* env = std::getenv("GRAPHCR_STATE_DIR");
    state_dir = env != nullptr ? env : "graphcr-state";
  }
  SessionManager manager(state_dir);
  const size_t restored = manager.RestoreAll();
  httplib::Server server;
  RegisterRoutes(server, manager);
  g_server = &server;
  std::signal(SIGINT, StopServer);
  std::signal(SIGTERM, StopServer);
  std::cerr << "serving on " << host << ":" << port << " (state "
            << manager.state_dir() << ", " << restored
            << " sessions restored)\n";
  if (!server.listen(host, port)) {
    std::cerr << "serve: cannot listen on " << host << ":" << port << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-based cluster repair for entity resolution"};
  app.require_subcommand(1);

  RunFlags run;
  auto* run_cmd = app.add_subcommand("run", "label, train and repair once");
  AddDataFlags(run_cmd, run.data, false);
  run_cmd->add_option("--replay", run.replay,
                      "labels CSV (record_a,record_b,label) used as oracle")
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--budget", run.budget, "labeling budget b")->required();
  run_cmd->add_option("--iter-budget", run.iter_budget, "questions per batch");
  run_cmd->add_option("--k", run.k, "ensemble size");
  run_cmd->add_option("--strategy", run.strategy, "bootstrap|bootstrap-ext")
      ->transform(CLI::CheckedTransformer(kStrategies, CLI::ignore_case));
  run_cmd->add_option("--seed", run.seed, "root seed");
  run_cmd->add_option("--noise", run.noise, "share of edges to corrupt")
      ->check(CLI::Range(0.0, 1.0));
  run_cmd->add_option("--threshold", run.threshold, "minimum edge similarity");
  run_cmd->add_option("--out", run.out, "output directory")->required();

  ExperimentFlags exp;
  auto* exp_cmd =
      app.add_subcommand("experiment", "grid of budgets, strategies, noise");
  AddDataFlags(exp_cmd, exp.data, true);
  exp_cmd->add_option("--budgets", exp.grid.budgets)->required()->delimiter(',');
  exp_cmd->add_option("--strategies", exp.strategies)->delimiter(',');
  exp_cmd->add_option("--noise", exp.grid.noise_ratios)->delimiter(',');
  exp_cmd->add_option("--threshold", exp.grid.threshold);
  exp_cmd->add_option("--repetitions", exp.grid.repetitions);
  exp_cmd->add_option("--iter-budget", exp.grid.iter_budget);
  exp_cmd->add_option("--k", exp.grid.k);
  exp_cmd->add_option("--seed", exp.grid.seed);
  exp_cmd->add_option("--out", exp.out, "directory for report.jsonl");

  SyntheticConfig synth;
  std::string synth_out;
  auto* gen_cmd = app.add_subcommand("generate", "write a synthetic dataset");
  gen_cmd->add_option("--entities", synth.entities);
  gen_cmd->add_option("--sources", synth.sources);
  gen_cmd->add_option("--duplicate-ratio", synth.duplicate_ratio);
  gen_cmd->add_option("--corruption-rate", synth.corruption_rate);
  gen_cmd->add_option("--variant-ratio", synth.variant_ratio);
  gen_cmd->add_option("--min-similarity", synth.min_similarity);
  gen_cmd->add_option("--seed", synth.seed);
  gen_cmd->add_option("--out", synth_out)->required();

  DataFlags feat_data;
  double feat_threshold = 0.0;
  std::string feat_out;
  auto* feat_cmd =
      app.add_subcommand("features", "export the raw feature matrix");
  AddDataFlags(feat_cmd, feat_data, false);
  feat_cmd->add_option("--threshold", feat_threshold);
  feat_cmd->add_option("--out", feat_out, "CSV path (default stdout)");

  std::string host = "127.0.0.1";
  int port = 8080;
  std::string state_dir;
  auto* serve_cmd = app.add_subcommand("serve", "HTTP labeling sessions");
  serve_cmd->add_option("--host", host);
  serve_cmd->add_option("--port", port);
  serve_cmd->add_option("--state-dir", state_dir,
                        "snapshot directory (default $GRAPHCR_STATE_DIR)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return Run(run);
    if (*exp_cmd) return Experiment(exp);
    if (*gen_cmd) return Generate(synth, synth_out);
    if (*feat_cmd) return Features(feat_data, feat_threshold, feat_out);
    if (*serve_cmd) return Serve(host, port, state_dir);
  } catch (const Error& e) {
    std::cerr << "graphcr: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "graphcr: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
