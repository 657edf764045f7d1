#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mirror/generators.hpp"
#include "mirror/graph.hpp"
#include "mirror/graphlets.hpp"
#include "mirror/metrics.hpp"

namespace mirror {

enum class ChainStatus { completed, fit_failure, degenerate_empty };

std::string to_string(ChainStatus status);

struct ChainConfig {
  ModelKind model_kind = ModelKind::chung_lu;
  int depth = 10;
  std::uint64_t seed = 0;
  int trials = 1;
  std::vector<int> record_levels = {2, 5, 8, 10};  // full snapshot levels
  bool compute_gcd = true;
  int hop_plot_sources = 50;
  // Source sampling for the hop plot; when unset, derived from `seed`. The
  // same stream is replayed at every level so a lossless model reproduces
  // level-0 records byte for byte.
  std::optional<std::uint64_t> hop_seed;
  GeneratorConfig generator;
  FitOptions fit;
};

struct MetricRecord {
  int level = 0;
  std::int64_t n = 0;
  std::int64_t m = 0;
  DegreeDistribution degree_distribution;
  CentralityVector centrality;
  HopPlot hop_plot;
  ClusteringProfile clustering_profile;
  AssortativityReport assortativity_report;
  double gcd_to_original = 0.0;
};

struct ChainResult {
  std::vector<MetricRecord> records;  // contiguous, levels 0..terminal_level
  std::vector<FitDiagnostics> fit_diagnostics;  // one per attempted fit
  std::vector<Model> models;                    // one per successful fit
  std::vector<std::uint64_t> model_source_hashes;
  std::vector<std::pair<int, Graph>> snapshots;
  ChainStatus status = ChainStatus::completed;
  int terminal_level = 0;
  int failed_level = -1;  // level whose fit/generation collapsed, else -1
  std::string failure_note;
  std::uint64_t chain_seed = 0;
  std::uint64_t hop_seed = 0;
  std::vector<std::uint64_t> level_seeds;  // generation seed per level 1..
};

ChainResult run_chain(const Graph& g, const ChainConfig& config);

struct DatasetInput {
  std::string name;
  Graph graph;
};

struct ExperimentConfig {
  std::vector<ModelKind> models;
  int depth = 10;
  int trials = 1;
  std::uint64_t seed = 0;
  std::vector<int> record_levels = {2, 5, 8, 10};
  bool compute_gcd = true;
  int hop_plot_sources = 50;
  GeneratorConfig generator;
  FitOptions fit;
  int max_threads = 0;  // 0: MIRROR_THREADS env, else hardware concurrency
};

struct ChainEntry {
  int dataset_index = 0;
  ModelKind model = ModelKind::chung_lu;
  int trial = 0;
  std::uint64_t seed = 0;
  ChainResult result;
};

struct GcdLevelSummary {
  int level = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  int trials = 0;  // chains that reached this level
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<std::string> dataset_names;
  std::vector<ChainEntry> chains;  // dataset-major, then model, then trial
  // gcd_summaries[dataset][model] -> per-level rows over all trials
  std::vector<std::vector<std::vector<GcdLevelSummary>>> gcd_summaries;
};

ExperimentResult run_experiment(const std::vector<DatasetInput>& inputs,
                                const ExperimentConfig& config);

}  // namespace mirror
