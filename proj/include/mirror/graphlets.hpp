#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mirror/graph.hpp"

namespace mirror {

inline constexpr int kNumOrbits = 15;

// Per-node counts of the 15 automorphism orbits of connected graphlets on
// 2-4 nodes, in the standard numbering (orbit 0 = degree, ..., 14 = K4).
struct OrbitCounts {
  std::vector<std::array<std::int64_t, kNumOrbits>> counts;

  int num_nodes() const { return static_cast<int>(counts.size()); }
};

OrbitCounts count_orbits(const Graph& g);

// Orbits entering the 11-orbit correlation matrix: redundant orbits
// {3, 12, 13, 14} are excluded.
inline constexpr std::array<int, 11> kGcdOrbits = {0, 1, 2, 4, 5, 6, 7, 8, 9, 10, 11};

// 11x11 Spearman correlation matrix over the GCD orbit columns, computed on
// the orbit matrix augmented with one all-ones dummy row.
using CorrelationMatrix = std::array<std::array<double, 11>, 11>;

CorrelationMatrix graphlet_correlation_matrix(const OrbitCounts& orbits);

// Euclidean distance between the strict upper triangles of two GCMs.
double gcd_distance(const CorrelationMatrix& a, const CorrelationMatrix& b);

double graphlet_correlation_distance(const Graph& a, const Graph& b);

}  // namespace mirror
