#include "mirror/chain.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace mirror {

std::string to_string(ChainStatus status) {
  switch (status) {
    case ChainStatus::completed: return "completed";
    case ChainStatus::fit_failure: return "fit_failure";
    case ChainStatus::degenerate_empty: return "degenerate_empty";
  }
  return "unknown";
}

namespace {

MetricRecord measure(const Graph& g, int level, std::uint64_t hop_seed,
                     int hop_sources, const CorrelationMatrix* original_gcm) {
  MetricRecord rec;
  rec.level = level;
  rec.n = g.num_nodes();
  rec.m = g.num_edges();
  rec.degree_distribution = degree_distribution(g);
  rec.centrality = eigenvector_centrality(g);
  Rng hop_rng(hop_seed);
  rec.hop_plot = hop_plot(g, hop_sources, hop_rng);
  rec.clustering_profile = clustering_profile(g);
  rec.assortativity_report = assortativity(g);
  if (original_gcm && level > 0)
    rec.gcd_to_original =
        gcd_distance(graphlet_correlation_matrix(count_orbits(g)), *original_gcm);
  return rec;
}

}  // namespace

ChainResult run_chain(const Graph& g, const ChainConfig& config) {
  if (g.num_nodes() < 1 || g.num_edges() < 1)
    throw std::invalid_argument("run_chain needs a graph with nodes and edges");
  if (config.depth < 1) throw std::invalid_argument("depth must be >= 1");
  if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");

  ChainResult res;
  res.chain_seed = config.seed;
  res.hop_seed = config.hop_seed.value_or(derive_seed(config.seed, {hash64("hop")}));

  std::optional<CorrelationMatrix> original_gcm;
  if (config.compute_gcd)
    original_gcm = graphlet_correlation_matrix(count_orbits(g));
  const CorrelationMatrix* gcm0 = original_gcm ? &*original_gcm : nullptr;

  res.records.push_back(measure(g, 0, res.hop_seed, config.hop_plot_sources, gcm0));
  auto snapshot_wanted = [&](int level) {
    return std::find(config.record_levels.begin(), config.record_levels.end(), level) !=
           config.record_levels.end();
  };
  if (snapshot_wanted(0)) res.snapshots.emplace_back(0, g);

  Graph current = g;
  for (int level = 1; level <= config.depth; ++level) {
    FittedModel fitted;
    try {
      fitted = fit_model(current, config.model_kind, config.fit);
    } catch (const FitFailure& failure) {
      res.status = ChainStatus::fit_failure;
      res.failed_level = level;
      res.failure_note = failure.what();
      res.fit_diagnostics.push_back(failure.diagnostics);
      break;
    }
    res.fit_diagnostics.push_back(fitted.diagnostics);
    res.model_source_hashes.push_back(graph_hash(current));

    const std::uint64_t gen_seed =
        derive_seed(config.seed, {static_cast<std::uint64_t>(level)});
    res.level_seeds.push_back(gen_seed);
    Rng gen_rng(gen_seed);
    Graph next = generate(fitted.model, gen_rng, config.generator);
    res.models.push_back(std::move(fitted.model));

    if (next.num_edges() == 0) {
      res.status = ChainStatus::degenerate_empty;
      res.failed_level = level;
      res.failure_note = "generated graph lost all edges at level " + std::to_string(level);
      break;
    }

    res.records.push_back(measure(next, level, res.hop_seed, config.hop_plot_sources, gcm0));
    if (snapshot_wanted(level)) res.snapshots.emplace_back(level, next);
    current = std::move(next);
  }

  res.terminal_level = res.records.back().level;
  return res;
}

namespace {

int resolve_threads(int requested, std::size_t jobs) {
  int n = requested;
  if (n <= 0) {
    if (const char* env = std::getenv("MIRROR_THREADS")) n = std::atoi(env);
  }
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n), jobs));
}

}  // namespace

ExperimentResult run_experiment(const std::vector<DatasetInput>& inputs,
                                const ExperimentConfig& config) {
  if (inputs.empty()) throw std::invalid_argument("run_experiment needs at least one input");
  if (config.models.empty()) throw std::invalid_argument("run_experiment needs at least one model");
  if (config.depth < 1) throw std::invalid_argument("depth must be >= 1");
  if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");

  ExperimentResult result;
  result.config = config;
  for (const auto& in : inputs) result.dataset_names.push_back(in.name);

  // Job list in canonical order; workers fill pre-sized slots so the output
  // layout is independent of scheduling.
  result.chains.resize(inputs.size() * config.models.size() *
                       static_cast<std::size_t>(config.trials));
  std::size_t slot = 0;
  for (std::size_t d = 0; d < inputs.size(); ++d) {
    for (std::size_t mi = 0; mi < config.models.size(); ++mi) {
      for (int t = 0; t < config.trials; ++t, ++slot) {
        auto& entry = result.chains[slot];
        entry.dataset_index = static_cast<int>(d);
        entry.model = config.models[mi];
        entry.trial = t;
        entry.seed = derive_seed(
            config.seed, {static_cast<std::uint64_t>(d),
                          static_cast<std::uint64_t>(entry.model),
                          static_cast<std::uint64_t>(t)});
      }
    }
  }

  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= result.chains.size()) break;
      auto& entry = result.chains[i];
      ChainConfig cc;
      cc.model_kind = entry.model;
      cc.depth = config.depth;
      cc.seed = entry.seed;
      cc.record_levels = config.record_levels;
      cc.compute_gcd = config.compute_gcd;
      cc.hop_plot_sources = config.hop_plot_sources;
      // shared across a dataset's trials so their level-0 records agree
      cc.hop_seed = derive_seed(
          config.seed, {hash64("hop"), static_cast<std::uint64_t>(entry.dataset_index)});
      cc.generator = config.generator;
      cc.fit = config.fit;
      entry.result = run_chain(inputs[entry.dataset_index].graph, cc);
    }
  };

  const int nthreads = resolve_threads(config.max_threads, result.chains.size());
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Per (dataset, model) GCD-vs-level aggregation across trials.
  result.gcd_summaries.assign(
      inputs.size(), std::vector<std::vector<GcdLevelSummary>>(config.models.size()));
  for (std::size_t d = 0; d < inputs.size(); ++d) {
    for (std::size_t mi = 0; mi < config.models.size(); ++mi) {
      auto& rows = result.gcd_summaries[d][mi];
      for (int level = 1; level <= config.depth; ++level) {
        GcdLevelSummary row;
        row.level = level;
        for (const auto& entry : result.chains) {
          if (entry.dataset_index != static_cast<int>(d) ||
              entry.model != config.models[mi])
            continue;
          for (const auto& rec : entry.result.records) {
            if (rec.level != level) continue;
            if (row.trials == 0) {
              row.min = row.max = rec.gcd_to_original;
            } else {
              row.min = std::min(row.min, rec.gcd_to_original);
              row.max = std::max(row.max, rec.gcd_to_original);
            }
            row.mean += rec.gcd_to_original;
            ++row.trials;
          }
        }
        if (row.trials == 0) continue;  // no chain survived to this level
        row.mean /= row.trials;
        rows.push_back(row);
      }
    }
  }
  return result;
}

}  // namespace mirror
