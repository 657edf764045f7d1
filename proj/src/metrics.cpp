#include "mirror/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>

namespace mirror {

DegreeDistribution degree_distribution(const Graph& g) {
  std::map<int, std::int64_t> hist;
  for (int v = 0; v < g.num_nodes(); ++v) ++hist[g.degree(v)];

  DegreeDistribution dd;
  dd.histogram.assign(hist.begin(), hist.end());
  const double n = static_cast<double>(g.num_nodes());
  std::int64_t at_least = g.num_nodes();
  for (const auto& [deg, count] : dd.histogram) {
    dd.ccdf.emplace_back(deg, static_cast<double>(at_least) / n);
    at_least -= count;
  }
  return dd;
}

CentralityVector eigenvector_centrality(const Graph& g, double tol, int max_iters) {
  if (g.num_edges() < 1) throw std::invalid_argument("eigenvector_centrality needs edges");

  auto label = component_labels(g);
  std::vector<int> size(*std::max_element(label.begin(), label.end()) + 1, 0);
  for (int v = 0; v < g.num_nodes(); ++v) ++size[label[v]];
  int best = 0;
  for (int c = 1; c < static_cast<int>(size.size()); ++c)
    if (size[c] > size[best]) best = c;

  CentralityVector out;
  out.restricted_to_giant = size[best] < g.num_nodes();

  std::vector<int> members;
  for (int v = 0; v < g.num_nodes(); ++v)
    if (label[v] == best) members.push_back(v);

  std::vector<double> x(g.num_nodes(), 0.0), next(g.num_nodes(), 0.0);
  double init = 1.0 / std::sqrt(static_cast<double>(members.size()));
  for (int v : members) x[v] = init;

  out.converged = false;
  for (int it = 0; it < max_iters; ++it) {
    out.iterations = it + 1;
    // x <- normalize((A + I) x); the shift keeps bipartite components from
    // oscillating between the +/- lambda_max eigenvectors.
    double norm_sq = 0.0;
    for (int v : members) {
      double acc = x[v];
      for (int u : g.neighbors(v)) acc += x[u];
      next[v] = acc;
      norm_sq += acc * acc;
    }
    double inv = 1.0 / std::sqrt(norm_sq);
    double diff_sq = 0.0;
    for (int v : members) {
      next[v] *= inv;
      double d = next[v] - x[v];
      diff_sq += d * d;
      x[v] = next[v];
    }
    if (std::sqrt(diff_sq) < tol) {
      out.converged = true;
      break;
    }
  }

  out.values = std::move(x);
  out.sorted_view = out.values;
  std::sort(out.sorted_view.begin(), out.sorted_view.end(), std::greater<>());
  return out;
}

HopPlot hop_plot(const Graph& g, int num_sources, Rng& rng) {
  const int n = g.num_nodes();
  if (n < 1) throw std::invalid_argument("hop_plot needs nodes");

  HopPlot hp;
  if (n <= num_sources) {
    hp.sources.resize(n);
    std::iota(hp.sources.begin(), hp.sources.end(), 0);
  } else {
    // Partial Fisher-Yates over the id range; sources reported in draw order.
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < num_sources; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng.index(n - i));
      std::swap(pool[i], pool[j]);
      hp.sources.push_back(pool[i]);
    }
  }

  std::vector<std::int64_t> reached_at;  // per hop distance, newly reached pairs
  std::vector<int> dist(n);
  std::vector<int> frontier, next_frontier;
  for (int s : hp.sources) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    frontier.assign(1, s);
    int h = 0;
    if (reached_at.empty()) reached_at.push_back(0);
    reached_at[0] += 1;
    while (!frontier.empty()) {
      ++h;
      next_frontier.clear();
      for (int v : frontier) {
        for (int u : g.neighbors(v)) {
          if (dist[u] == -1) {
            dist[u] = h;
            next_frontier.push_back(u);
          }
        }
      }
      if (!next_frontier.empty()) {
        if (static_cast<int>(reached_at.size()) <= h) reached_at.resize(h + 1, 0);
        reached_at[h] += static_cast<std::int64_t>(next_frontier.size());
      }
      frontier.swap(next_frontier);
    }
  }

  hp.counts.resize(reached_at.size());
  std::partial_sum(reached_at.begin(), reached_at.end(), hp.counts.begin());
  return hp;
}

ClusteringProfile clustering_profile(const Graph& g) {
  const int n = g.num_nodes();
  ClusteringProfile cp;
  cp.local.assign(n, 0.0);

  // Triangles per node via sorted-neighbor-list intersection on each edge.
  std::vector<std::int64_t> tri(n, 0);
  for (const auto& [u, v] : g.edges()) {
    auto nu = g.neighbors(u);
    auto nv = g.neighbors(v);
    std::size_t i = 0, j = 0;
    while (i < nu.size() && j < nv.size()) {
      if (nu[i] == nv[j]) {
        ++tri[u];
        ++tri[v];
        ++i;
        ++j;
      } else if (nu[i] < nv[j]) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  double sum = 0.0;
  std::int64_t wedges = 0, closed = 0;
  std::map<int, std::pair<double, int>> by_degree;  // degree -> (cc sum, count)
  for (int v = 0; v < n; ++v) {
    const int d = g.degree(v);
    // tri[v] counted each incident edge once, i.e. twice per triangle at v.
    const std::int64_t t = tri[v] / 2;
    if (d >= 2) {
      cp.local[v] = 2.0 * static_cast<double>(t) / (static_cast<double>(d) * (d - 1));
      wedges += static_cast<std::int64_t>(d) * (d - 1) / 2;
      closed += t;
    }
    sum += cp.local[v];
    auto& slot = by_degree[d];
    slot.first += cp.local[v];
    slot.second += 1;
  }
  cp.global_mean = n > 0 ? sum / n : 0.0;
  cp.transitivity = wedges > 0 ? static_cast<double>(closed) / static_cast<double>(wedges) : 0.0;
  for (const auto& [deg, acc] : by_degree)
    cp.by_degree.emplace_back(deg, acc.first / acc.second);
  return cp;
}

AssortativityReport assortativity(const Graph& g) {
  if (g.num_edges() < 1) throw std::invalid_argument("assortativity needs edges");
  const double pairs = 2.0 * static_cast<double>(g.num_edges());

  double mean = 0.0;
  for (const auto& [u, v] : g.edges()) mean += g.degree(u) + g.degree(v);
  mean /= pairs;

  double var = 0.0;
  for (const auto& [u, v] : g.edges()) {
    double du = g.degree(u) - mean, dv = g.degree(v) - mean;
    var += du * du + dv * dv;
  }
  var /= pairs;

  AssortativityReport rep;
  if (var <= 1e-15) {
    rep.status = AssortativityStatus::zero_variance;
    return rep;
  }

  // r = sum_v (d_v - mu) * sum_{u in N(v)} (d_u - mu) / (2m var), which
  // assigns each node an additive share of the Pearson numerator.
  rep.local.assign(g.num_nodes(), 0.0);
  const double denom = pairs * var;
  for (int v = 0; v < g.num_nodes(); ++v) {
    double acc = 0.0;
    for (int u : g.neighbors(v)) acc += g.degree(u) - mean;
    rep.local[v] = (g.degree(v) - mean) * acc / denom;
    rep.global_r += rep.local[v];
  }
  return rep;
}

}  // namespace mirror
