#include "mirror/graphlets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace mirror {

namespace {

// Average ranks (1-based, ties averaged) of a column of orbit counts.
std::vector<double> average_ranks(const std::vector<std::int64_t>& column) {
  const std::size_t n = column.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return column[a] < column[b]; });

  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && column[order[j + 1]] == column[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  // Raw-moment form on purpose: ranks are half-integers, so every partial
  // sum below is exactly representable and independent of row order. That
  // makes the correlation — and hence the GCD — bit-identical under node
  // relabeling instead of merely close.
  const double n = static_cast<double>(a.size());
  double sa = 0.0, sb = 0.0, sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sa += a[i];
    sb += b[i];
    sab += a[i] * b[i];
    saa += a[i] * a[i];
    sbb += b[i] * b[i];
  }
  const double vaa = saa - sa * sa / n;
  const double vbb = sbb - sb * sb / n;
  const double vab = sab - sa * sb / n;
  if (vaa <= 0.0 && vbb <= 0.0) return 1.0;  // two constant rank vectors agree
  if (vaa <= 0.0 || vbb <= 0.0) return 0.0;
  return vab / std::sqrt(vaa * vbb);
}

}  // namespace

OrbitCounts count_orbits(const Graph& g) {
  const int n = g.num_nodes();
  const auto& edges = g.edges();
  const std::int64_t m = g.num_edges();

  OrbitCounts result;
  result.counts.assign(static_cast<std::size_t>(n), {});
  if (n == 0 || m == 0) {
    for (int v = 0; v < n; ++v) result.counts[v][0] = g.degree(v);
    return result;
  }

  // Incidence lists (neighbor, edge id) sorted by neighbor, so the
  // equation passes can look up per-edge triangle counts while merging.
  std::vector<std::int64_t> off(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& [u, v] : edges) {
    ++off[u + 1];
    ++off[v + 1];
  }
  std::partial_sum(off.begin(), off.end(), off.begin());
  std::vector<std::pair<int, int>> inc(static_cast<std::size_t>(2 * m));
  {
    std::vector<std::int64_t> cur(off.begin(), off.end() - 1);
    for (std::int64_t e = 0; e < m; ++e) {
      const auto [u, v] = edges[e];
      inc[cur[u]++] = {v, static_cast<int>(e)};
      inc[cur[v]++] = {u, static_cast<int>(e)};
    }
  }
  for (int v = 0; v < n; ++v)
    std::sort(inc.begin() + off[v], inc.begin() + off[v + 1]);

  // Triangles spanning each edge: merge the sorted endpoint neighborhoods.
  std::vector<int> tri(static_cast<std::size_t>(m), 0);
  for (std::int64_t e = 0; e < m; ++e) {
    const auto [x, y] = edges[e];
    const auto nx = g.neighbors(x);
    const auto ny = g.neighbors(y);
    std::size_t i = 0, j = 0;
    while (i < nx.size() && j < ny.size()) {
      if (nx[i] == ny[j]) {
        ++tri[e];
        ++i;
        ++j;
      } else if (nx[i] < ny[j]) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  // Complete graphlets: enumerate each K4 once via x > y > z ordering.
  std::vector<std::int64_t> c4(static_cast<std::size_t>(n), 0);
  std::vector<int> clique_neigh;
  for (int x = 0; x < n; ++x) {
    for (int y : g.neighbors(x)) {
      if (y >= x) break;
      clique_neigh.clear();
      for (int z : g.neighbors(y)) {
        if (z >= y) break;
        if (g.has_edge(x, z)) clique_neigh.push_back(z);
      }
      for (std::size_t i = 0; i < clique_neigh.size(); ++i)
        for (std::size_t j = i + 1; j < clique_neigh.size(); ++j)
          if (g.has_edge(clique_neigh[i], clique_neigh[j])) {
            ++c4[x];
            ++c4[y];
            ++c4[clique_neigh[i]];
            ++c4[clique_neigh[j]];
          }
    }
  }

  // Per-node system of equations over partial graphlet sums; the f_* names
  // record which orbits each raw accumulator mixes together.
  std::vector<int> common(static_cast<std::size_t>(n), 0);
  std::vector<int> touched;
  for (int x = 0; x < n; ++x) {
    auto& o = result.counts[x];
    const int dx = g.degree(x);
    o[0] = dx;

    std::int64_t f_12_14 = 0, f_10_13 = 0, f_13_14 = 0, f_11_13 = 0;
    std::int64_t f_7_11 = 0, f_5_8 = 0, f_6_9 = 0, f_9_12 = 0;
    std::int64_t f_4_8 = 0, f_8_12 = 0;
    const std::int64_t f_14 = c4[x];

    for (int t : touched) common[t] = 0;
    touched.clear();

    // x as the middle node
    for (std::int64_t ix = off[x]; ix < off[x + 1]; ++ix) {
      const auto [y, ey] = inc[ix];
      const int dy = g.degree(y);
      for (std::int64_t iy = off[y]; iy < off[y + 1]; ++iy) {
        const auto [z, ez] = inc[iy];
        if (g.has_edge(x, z)) {
          if (z < y) {
            f_12_14 += tri[ez] - 1;
            f_10_13 += (dy - 1 - tri[ez]) + (g.degree(z) - 1 - tri[ez]);
          }
        } else if (z != x) {
          if (common[z] == 0) touched.push_back(z);
          ++common[z];
        }
      }
      for (std::int64_t ix2 = ix + 1; ix2 < off[x + 1]; ++ix2) {
        const auto [z, ez] = inc[ix2];
        if (g.has_edge(y, z)) {  // triangle x,y,z
          ++o[3];
          f_13_14 += (tri[ey] - 1) + (tri[ez] - 1);
          f_11_13 += (dx - 1 - tri[ey]) + (dx - 1 - tri[ez]);
        } else {  // path y-x-z
          ++o[2];
          f_7_11 += (dx - 1 - tri[ey] - 1) + (dx - 1 - tri[ez] - 1);
          f_5_8 += (dy - 1 - tri[ey]) + (g.degree(z) - 1 - tri[ez]);
        }
      }
    }

    // x as a side node
    for (std::int64_t ix = off[x]; ix < off[x + 1]; ++ix) {
      const auto [y, ey] = inc[ix];
      const int dy = g.degree(y);
      for (std::int64_t iy = off[y]; iy < off[y + 1]; ++iy) {
        const auto [z, ez] = inc[iy];
        if (z == x) continue;
        if (!g.has_edge(x, z)) {  // path x-y-z
          ++o[1];
          f_6_9 += dy - 1 - tri[ey] - 1;
          f_9_12 += tri[ez];
          f_4_8 += g.degree(z) - 1 - tri[ez];
          f_8_12 += common[z] - 1;
        }
      }
    }

    o[14] = f_14;
    o[13] = (f_13_14 - 6 * f_14) / 2;
    o[12] = f_12_14 - 3 * f_14;
    o[11] = (f_11_13 - f_13_14 + 6 * f_14) / 2;
    o[10] = f_10_13 - f_13_14 + 6 * f_14;
    o[9] = (f_9_12 - 2 * f_12_14 + 6 * f_14) / 2;
    o[8] = (f_8_12 - 2 * f_12_14 + 6 * f_14) / 2;
    o[7] = (f_13_14 + f_7_11 - f_11_13 - 6 * f_14) / 6;
    o[6] = (2 * f_12_14 + f_6_9 - f_9_12 - 6 * f_14) / 2;
    o[5] = 2 * f_12_14 + f_5_8 - f_8_12 - 6 * f_14;
    o[4] = 2 * f_12_14 + f_4_8 - f_8_12 - 6 * f_14;
  }

  return result;
}

CorrelationMatrix graphlet_correlation_matrix(const OrbitCounts& orbits) {
  const std::size_t rows = orbits.counts.size() + 1;  // + dummy all-ones row

  std::array<std::vector<double>, 11> ranks;
  for (std::size_t c = 0; c < kGcdOrbits.size(); ++c) {
    std::vector<std::int64_t> column(rows, 1);  // dummy row last
    for (std::size_t v = 0; v < orbits.counts.size(); ++v)
      column[v] = orbits.counts[v][kGcdOrbits[c]];
    ranks[c] = average_ranks(column);
  }

  CorrelationMatrix cm{};
  for (std::size_t i = 0; i < 11; ++i) {
    cm[i][i] = 1.0;
    for (std::size_t j = i + 1; j < 11; ++j) {
      const double r = pearson(ranks[i], ranks[j]);
      cm[i][j] = r;
      cm[j][i] = r;
    }
  }
  return cm;
}

double gcd_distance(const CorrelationMatrix& a, const CorrelationMatrix& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < 11; ++i)
    for (std::size_t j = i + 1; j < 11; ++j) {
      const double d = a[i][j] - b[i][j];
      sum += d * d;
    }
  return std::sqrt(sum);
}

double graphlet_correlation_distance(const Graph& a, const Graph& b) {
  return gcd_distance(graphlet_correlation_matrix(count_orbits(a)),
                      graphlet_correlation_matrix(count_orbits(b)));
}

}  // namespace mirror
