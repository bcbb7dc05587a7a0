#ifndef GRAPHCR_EXPERIMENT_H_
#define GRAPHCR_EXPERIMENT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "graphcr/pipeline.h"

namespace graphcr {

struct ExperimentGrid {
  std::vector<int> budgets;
  std::vector<Strategy> strategies;
  std::vector<double> noise_ratios = {0.0};
  double threshold = 0.0;
  int repetitions = 3;
  int iter_budget = 20;
  int k = 100;
  uint64_t seed = 42;
};

// One grid cell averaged over repetitions. F1 is the mean of per-run F1s.
struct ExperimentCell {
  std::string dataset;
  int budget = 0;
  Strategy strategy = Strategy::kBootstrapExt;
  double noise_ratio = 0.0;
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // Connected components of the thresholded (and noised) input graph.
  double baseline_f1 = 0.0;
  int repetitions = 0;
  std::vector<QualityReport> runs;
  std::vector<double> baseline_runs;
  std::vector<uint64_t> seeds;
};

// Seed of repetition r: DeriveSeed(root, r). Noise uses a stream derived
// from the repetition seed alone, so a 0 ratio leaves the run untouched.
uint64_t RepetitionSeed(uint64_t root, int repetition);
uint64_t NoiseSeed(uint64_t repetition_seed);

struct RunOutcome {
  PipelineResult pipeline;
  QualityReport quality;
  double baseline_f1 = 0.0;
};

// Single pipeline run against the dataset's gold oracle.
// Throws Error{kMissingGold} when the dataset has no gold standard.
RunOutcome RunWithGold(const Dataset& dataset, const PipelineConfig& config);

ExperimentCell RunCell(const Dataset& dataset, const ExperimentGrid& grid,
                       int budget, Strategy strategy, double noise_ratio);

// Cells in budget-major, then strategy, then noise order.
std::vector<ExperimentCell> RunExperiment(const Dataset& dataset,
                                          const ExperimentGrid& grid);

}  // namespace graphcr

#endif  // GRAPHCR_EXPERIMENT_H_
