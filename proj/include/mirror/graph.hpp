#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mirror {

/// Immutable undirected simple graph over dense node ids 0..n-1.
/// Self-loops and duplicate edges are removed at construction, so every
/// Graph instance satisfies the simple-graph invariants by construction.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph on n nodes from an arbitrary edge list. Self-loops are
  /// dropped and duplicates collapsed; node ids must lie in [0, n).
  Graph(int n, std::vector<std::pair<int, int>> edges);

  int num_nodes() const { return n_; }
  std::int64_t num_edges() const { return static_cast<std::int64_t>(edges_.size()); }

  int degree(int v) const { return static_cast<int>(offsets_[v + 1] - offsets_[v]); }

  /// Sorted neighbor list of v.
  std::span<const int> neighbors(int v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }

  bool has_edge(int u, int v) const;

  /// Edges as (min, max) pairs, sorted lexicographically.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::int64_t> offsets_;  // CSR offsets, size n_+1
  std::vector<int> adj_;
};

struct DegreeSequence {
  std::vector<int> degrees;  // index = node id
  std::int64_t total = 0;    // = 2m of the source graph
};

DegreeSequence degree_sequence(const Graph& g);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t line)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct LoadOptions {
  bool keep_largest_component = false;
};

struct LoadDiagnostics {
  std::vector<std::string> id_to_token;  // dense id -> original token
  std::int64_t self_loops_dropped = 0;
  std::int64_t duplicates_collapsed = 0;
  std::size_t lines_read = 0;
};

struct LoadResult {
  Graph graph;
  LoadDiagnostics diagnostics;
};

/// Parses edge-list text: one edge per line, two whitespace-separated
/// tokens, '#'/'%' comment lines. Tokens are remapped to dense ids in
/// first-appearance order. Throws ParseError on malformed lines and
/// std::invalid_argument when no edges survive cleaning.
LoadResult load_edge_list(std::istream& in, const LoadOptions& options = {});
LoadResult load_edge_list_file(const std::string& path, const LoadOptions& options = {});

/// Serializes to the same edge-list format, one "u v" line per edge,
/// sorted by (min id, max id). Round-trips through load_edge_list.
void write_edge_list(const Graph& g, std::ostream& out);
std::string to_edge_list(const Graph& g);

struct GraphStats {
  int n = 0;
  std::int64_t m = 0;
  int max_degree = 0;
  int component_count = 0;
  int giant_component_size = 0;
};

GraphStats graph_stats(const Graph& g);

// Order-insensitive only in the sense that the canonical edge list is already
// sorted; equal graphs hash equal, used for source-graph stamps and seed salts.
std::uint64_t graph_hash(const Graph& g);

/// Component label per node; components numbered in order of their
/// smallest node id.
std::vector<int> component_labels(const Graph& g);

/// Induced subgraph on the largest connected component, ids re-densified
/// in ascending original-id order. Ties go to the component containing
/// the smallest node id.
Graph giant_component(const Graph& g);

}  // namespace mirror
