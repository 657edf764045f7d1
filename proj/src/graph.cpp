#include "mirror/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "mirror/rng.hpp"

namespace mirror {

Graph::Graph(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
  if (n < 0) throw std::invalid_argument("node count must be non-negative");
  for (auto& [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw std::invalid_argument("edge endpoint out of range");
    if (u > v) std::swap(u, v);
  }
  std::erase_if(edges, [](const auto& e) { return e.first == e.second; });
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);

  offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
  for (const auto& [u, v] : edges_) {
    ++offsets_[u + 1];
    ++offsets_[v + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  adj_.resize(static_cast<std::size_t>(offsets_[n_]));
  std::vector<std::int64_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [u, v] : edges_) {
    adj_[cursor[u]++] = v;
    adj_[cursor[v]++] = u;
  }
  // Edge insertion order keeps each neighbor list sorted already for the
  // second endpoint but not the first; sort to guarantee it.
  for (int v = 0; v < n_; ++v)
    std::sort(adj_.begin() + offsets_[v], adj_.begin() + offsets_[v + 1]);
}

bool Graph::has_edge(int u, int v) const {
  if (u == v) return false;
  if (degree(u) > degree(v)) std::swap(u, v);
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

DegreeSequence degree_sequence(const Graph& g) {
  DegreeSequence seq;
  seq.degrees.resize(g.num_nodes());
  for (int v = 0; v < g.num_nodes(); ++v) {
    seq.degrees[v] = g.degree(v);
    seq.total += seq.degrees[v];
  }
  return seq;
}

LoadResult load_edge_list(std::istream& in, const LoadOptions& options) {
  std::unordered_map<std::string, int> token_to_id;
  LoadDiagnostics diag;
  std::vector<std::pair<int, int>> raw_edges;
  std::string line;
  std::size_t line_no = 0;

  auto intern = [&](const std::string& token) {
    auto [it, inserted] = token_to_id.emplace(token, static_cast<int>(diag.id_to_token.size()));
    if (inserted) diag.id_to_token.push_back(token);
    return it->second;
  };

  while (std::getline(in, line)) {
    ++line_no;
    ++diag.lines_read;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#' || line[start] == '%') continue;

    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a >> b) || (fields >> extra))
      throw ParseError("expected exactly 2 tokens", line_no);
    const int ia = intern(a);  // sequenced: ids follow first appearance
    const int ib = intern(b);
    raw_edges.emplace_back(ia, ib);
  }

  const int n = static_cast<int>(diag.id_to_token.size());
  std::vector<std::pair<int, int>> edges;
  edges.reserve(raw_edges.size());
  for (auto [u, v] : raw_edges) {
    if (u == v) {
      ++diag.self_loops_dropped;
      continue;
    }
    edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(edges.begin(), edges.end());
  auto dup_begin = std::unique(edges.begin(), edges.end());
  diag.duplicates_collapsed = edges.end() - dup_begin;
  edges.erase(dup_begin, edges.end());
  if (edges.empty()) throw std::invalid_argument("edge list holds no usable edges");

  LoadResult result{Graph(n, std::move(edges)), std::move(diag)};
  if (options.keep_largest_component) result.graph = giant_component(result.graph);
  return result;
}

LoadResult load_edge_list_file(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_edge_list(in, options);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

std::string to_edge_list(const Graph& g) {
  std::ostringstream out;
  write_edge_list(g, out);
  return out.str();
}

std::vector<int> component_labels(const Graph& g) {
  std::vector<int> label(g.num_nodes(), -1);
  std::vector<int> stack;
  int next = 0;
  for (int s = 0; s < g.num_nodes(); ++s) {
    if (label[s] != -1) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int u : g.neighbors(v)) {
        if (label[u] == -1) {
          label[u] = next;
          stack.push_back(u);
        }
      }
    }
    ++next;
  }
  return label;
}

GraphStats graph_stats(const Graph& g) {
  GraphStats stats;
  stats.n = g.num_nodes();
  stats.m = g.num_edges();
  for (int v = 0; v < g.num_nodes(); ++v)
    stats.max_degree = std::max(stats.max_degree, g.degree(v));
  auto label = component_labels(g);
  for (int v = 0; v < g.num_nodes(); ++v)
    stats.component_count = std::max(stats.component_count, label[v] + 1);
  std::vector<int> size(stats.component_count, 0);
  for (int v = 0; v < g.num_nodes(); ++v) ++size[label[v]];
  for (int s : size) stats.giant_component_size = std::max(stats.giant_component_size, s);
  return stats;
}

std::uint64_t graph_hash(const Graph& g) {
  std::uint64_t h = hash64("graph");
  h = splitmix64(h ^ static_cast<std::uint64_t>(g.num_nodes()));
  h = splitmix64(h ^ static_cast<std::uint64_t>(g.num_edges()));
  for (const auto& [u, v] : g.edges()) {
    h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)));
    h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)));
  }
  return h;
}

Graph giant_component(const Graph& g) {
  if (g.num_edges() < 1) throw std::invalid_argument("giant_component needs at least one edge");
  auto label = component_labels(g);
  int comps = *std::max_element(label.begin(), label.end()) + 1;
  std::vector<int> size(comps, 0);
  for (int v = 0; v < g.num_nodes(); ++v) ++size[label[v]];
  // Labels are assigned in ascending smallest-node-id order, so the first
  // maximal component wins ties by smallest original min node id.
  int best = 0;
  for (int c = 1; c < comps; ++c)
    if (size[c] > size[best]) best = c;

  std::vector<int> remap(g.num_nodes(), -1);
  int next = 0;
  for (int v = 0; v < g.num_nodes(); ++v)
    if (label[v] == best) remap[v] = next++;
  std::vector<std::pair<int, int>> edges;
  for (const auto& [u, v] : g.edges())
    if (label[u] == best) edges.emplace_back(remap[u], remap[v]);
  return Graph(next, std::move(edges));
}

}  // namespace mirror
