#include "graphcr/experiment.h"

#include <future>

#include "graphcr/rng.h"

namespace graphcr {

uint64_t RepetitionSeed(uint64_t root, int repetition) {
  return DeriveSeed(root, static_cast<uint64_t>(repetition));
}

uint64_t NoiseSeed(uint64_t repetition_seed) {
  constexpr uint64_t kNoiseStream = 0x6e6f697365ULL;
  return DeriveSeed(repetition_seed, kNoiseStream);
}

RunOutcome RunWithGold(const Dataset& dataset, const PipelineConfig& config) {
  if (!dataset.gold) {
    throw Error(ErrorCode::kMissingGold, "dataset has no gold standard");
  }
  GoldOracle oracle(*dataset.gold);
  RunOutcome out;
  out.pipeline = RunPipeline(dataset.graph, oracle, config);
  out.quality = PairwisePrf(out.pipeline.repair.clusters, *dataset.gold);
  out.baseline_f1 =
      PairwisePrf(ComponentPartition(out.pipeline.prepared.input),
                  *dataset.gold)
          .f1;
  return out;
}

ExperimentCell RunCell(const Dataset& dataset, const ExperimentGrid& grid,
                       int budget, Strategy strategy, double noise_ratio) {
  ExperimentCell cell;
  cell.dataset = dataset.name;
  cell.budget = budget;
  cell.strategy = strategy;
  cell.noise_ratio = noise_ratio;
  cell.threshold = grid.threshold;
  cell.repetitions = grid.repetitions;
  for (int r = 0; r < grid.repetitions; ++r) {
    const uint64_t seed = RepetitionSeed(grid.seed, r);
    PipelineConfig config;
    config.selection = {budget, grid.iter_budget, strategy, grid.k, seed};
    config.prepare = {grid.threshold, noise_ratio, NoiseSeed(seed)};
    const RunOutcome run = RunWithGold(dataset, config);
    cell.runs.push_back(run.quality);
    cell.baseline_runs.push_back(run.baseline_f1);
    cell.seeds.push_back(seed);
    cell.precision += run.quality.precision;
    cell.recall += run.quality.recall;
    cell.f1 += run.quality.f1;
    cell.baseline_f1 += run.baseline_f1;
  }
  if (grid.repetitions > 0) {
    const double n = static_cast<double>(grid.repetitions);
    cell.precision /= n;
    cell.recall /= n;
    cell.f1 /= n;
    cell.baseline_f1 /= n;
  }
  return cell;
}

std::vector<ExperimentCell> RunExperiment(const Dataset& dataset,
                                          const ExperimentGrid& grid) {
  // Cells own their sessions and seeds, so they run concurrently.
  std::vector<std::future<ExperimentCell>> pending;
  for (int budget : grid.budgets) {
    for (Strategy strategy : grid.strategies) {
      for (double noise : grid.noise_ratios) {
        pending.push_back(std::async(std::launch::async, [&, budget,
                                                          strategy, noise] {
          return RunCell(dataset, grid, budget, strategy, noise);
        }));
      }
    }
  }
  std::vector<ExperimentCell> cells;
  for (auto& f : pending) cells.push_back(f.get());
  return cells;
}

}  // namespace graphcr
