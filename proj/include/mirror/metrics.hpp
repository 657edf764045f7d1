#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mirror/graph.hpp"
#include "mirror/rng.hpp"

namespace mirror {

struct DegreeDistribution {
  std::vector<std::pair<int, std::int64_t>> histogram;  // (degree, node count), ascending degree
  std::vector<std::pair<int, double>> ccdf;  // (degree, fraction of nodes with degree >= d)
};

DegreeDistribution degree_distribution(const Graph& g);

struct CentralityVector {
  std::vector<double> values;       // per node; L2 norm 1; zeros off the giant component
  std::vector<double> sorted_view;  // values in descending order
  bool converged = true;
  int iterations = 0;
  bool restricted_to_giant = false;
};

/// Principal-eigenvector centrality by power iteration on the giant
/// component (diagonal-shifted so bipartite components converge too).
/// Nodes outside the giant component score 0. Non-convergence after
/// max_iters returns the partial vector with converged=false.
CentralityVector eigenvector_centrality(const Graph& g, double tol = 1e-10,
                                        int max_iters = 1000);

struct HopPlot {
  std::vector<std::int64_t> counts;  // counts[h] = ordered (source, target) pairs with dist <= h
  std::vector<int> sources;
};

/// BFS from num_sources sampled nodes (all nodes when n <= num_sources).
/// counts[0] = |sources| since every source reaches itself at 0 hops.
HopPlot hop_plot(const Graph& g, int num_sources, Rng& rng);

struct ClusteringProfile {
  std::vector<double> local;  // per-node local clustering coefficient
  double global_mean = 0.0;   // unweighted mean of local
  double transitivity = 0.0;  // 3*triangles / wedges, exposed alongside the mean
  std::vector<std::pair<int, double>> by_degree;  // (degree, mean local cc)
};

ClusteringProfile clustering_profile(const Graph& g);

enum class AssortativityStatus { ok, zero_variance };

struct AssortativityReport {
  AssortativityStatus status = AssortativityStatus::ok;
  double global_r = 0.0;      // Pearson degree correlation over both edge orientations
  std::vector<double> local;  // per-node additive share; sums to global_r
};

/// Degree assortativity. Regular graphs have zero endpoint-degree variance;
/// that is reported as status zero_variance rather than NaN so mirror
/// chains on degenerate graphs keep running.
AssortativityReport assortativity(const Graph& g);

}  // namespace mirror
