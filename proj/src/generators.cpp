#include "mirror/generators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_set>

#include "mirror/metrics.hpp"

namespace mirror {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::chung_lu: return "cl";
    case ModelKind::tcl: return "tcl";
    case ModelKind::bcl: return "bcl";
    case ModelKind::kronecker: return "kron";
    case ModelKind::bter: return "bter";
    case ModelKind::identity: return "identity";
  }
  return "unknown";
}

std::optional<ModelKind> parse_model_kind(const std::string& name) {
  if (name == "cl") return ModelKind::chung_lu;
  if (name == "tcl") return ModelKind::tcl;
  if (name == "bcl") return ModelKind::bcl;
  if (name == "kron") return ModelKind::kronecker;
  if (name == "bter") return ModelKind::bter;
  if (name == "identity") return ModelKind::identity;
  return std::nullopt;
}

ModelKind model_kind(const Model& model) {
  return std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, CLModel>) return ModelKind::chung_lu;
        if constexpr (std::is_same_v<T, TCLModel>) return ModelKind::tcl;
        if constexpr (std::is_same_v<T, BCLModel>) return ModelKind::bcl;
        if constexpr (std::is_same_v<T, KronModel>) return ModelKind::kronecker;
        if constexpr (std::is_same_v<T, BTERModel>) return ModelKind::bter;
        if constexpr (std::is_same_v<T, IdentityModel>) return ModelKind::identity;
      },
      model);
}

FitFailure::FitFailure(const std::string& msg, FitDiagnostics diag, Model partial)
    : std::runtime_error(msg),
      diagnostics(std::move(diag)),
      partial_model(std::move(partial)) {}

namespace {

std::uint64_t edge_key(int u, int v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(v);
}

// Endpoint table for FCL draws: node i appears degree(i) times, so a uniform
// index gives P(i) = d_i / 2m exactly.
std::vector<int> build_pins(const std::vector<int>& degrees) {
  std::vector<int> pins;
  for (std::size_t v = 0; v < degrees.size(); ++v)
    pins.insert(pins.end(), static_cast<std::size_t>(degrees[v]), static_cast<int>(v));
  return pins;
}

}  // namespace

Graph generate_chung_lu(const CLModel& model, Rng& rng, const GeneratorConfig& config) {
  if (model.degrees.total < 2) throw std::invalid_argument("degree sequence has no edge mass");
  const int n = static_cast<int>(model.degrees.degrees.size());
  const std::int64_t target = model.degrees.total / 2;

  const auto pins = build_pins(model.degrees.degrees);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(static_cast<std::size_t>(target) * 2);
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(target));

  for (std::int64_t e = 0; e < target; ++e) {
    for (int attempt = 0; attempt <= config.retry_cap; ++attempt) {
      const int u = pins[rng.index(pins.size())];
      const int v = pins[rng.index(pins.size())];
      if (u == v || !seen.insert(edge_key(u, v)).second) continue;
      edges.emplace_back(u, v);
      break;
    }
  }
  return Graph(n, edges);
}

Graph generate_tcl(const TCLModel& model, Rng& rng, const GeneratorConfig& config) {
  if (model.degrees.total < 2) throw std::invalid_argument("degree sequence has no edge mass");
  const int n = static_cast<int>(model.degrees.degrees.size());
  const std::int64_t target = model.degrees.total / 2;

  const auto pins = build_pins(model.degrees.degrees);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(static_cast<std::size_t>(target) * 2);
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  std::vector<int> active;  // nodes with at least one placed edge

  auto place = [&](int u, int v) {
    edges.emplace_back(u, v);
    if (adj[u].empty()) active.push_back(u);
    if (adj[v].empty()) active.push_back(v);
    adj[u].push_back(v);
    adj[v].push_back(u);
  };

  for (std::int64_t e = 0; e < target; ++e) {
    // rho == 0 must replay Chung-Lu draw-for-draw, so no coin is spent on it.
    const bool close = model.rho > 0.0 && rng.uniform01() < model.rho;
    if (close && !active.empty()) {
      const int u = active[rng.index(active.size())];
      const int v = adj[u][rng.index(adj[u].size())];
      const int w = adj[v][rng.index(adj[v].size())];
      if (w != u && seen.insert(edge_key(u, w)).second) {
        place(u, w);
        continue;
      }
      // two-hop walk failed; fall through to a plain FCL placement
    }
    for (int attempt = 0; attempt <= config.retry_cap; ++attempt) {
      const int u = pins[rng.index(pins.size())];
      const int v = pins[rng.index(pins.size())];
      if (u == v || !seen.insert(edge_key(u, v)).second) continue;
      place(u, v);
      break;
    }
  }
  return Graph(n, edges);
}

int BCLModel::bin_of(int degree) const {
  if (degree < 1 || bins.empty()) return 0;
  int b = 0;
  while (b + 1 < static_cast<int>(bins.size()) && bins[b + 1] <= degree) ++b;
  return b;
}

BCLModel fit_bcl(const Graph& g, const BCLFitConfig& config) {
  if (g.num_edges() < 1) throw std::invalid_argument("fit_bcl needs at least one edge");
  if (config.bin_scheme != "pow2")
    throw std::invalid_argument("unknown bin_scheme: " + config.bin_scheme);

  BCLModel model;
  model.degrees = degree_sequence(g);

  int max_degree = 1;
  for (int d : model.degrees.degrees) max_degree = std::max(max_degree, d);
  model.bins.push_back(1);
  while (model.bins.back() * 2 <= max_degree) model.bins.push_back(model.bins.back() * 2);

  const std::size_t nb = model.bins.size();
  model.observed.assign(nb, std::vector<double>(nb, 0.0));
  model.expected.assign(nb, std::vector<double>(nb, 0.0));
  model.bin_affinity.assign(nb, std::vector<double>(nb, 1.0));

  std::vector<double> mass(nb, 0.0), mass_sq(nb, 0.0);
  for (int d : model.degrees.degrees) {
    if (d < 1) continue;
    const int b = model.bin_of(d);
    mass[b] += d;
    mass_sq[b] += static_cast<double>(d) * d;
  }

  for (const auto& [u, v] : g.edges()) {
    const int a = model.bin_of(g.degree(u));
    const int b = model.bin_of(g.degree(v));
    model.observed[a][b] += 1.0;
    if (a != b) model.observed[b][a] += 1.0;
  }

  const double two_m = static_cast<double>(model.degrees.total);
  for (std::size_t a = 0; a < nb; ++a) {
    for (std::size_t b = a; b < nb; ++b) {
      // Chung-Lu expectation of the edge count between the bins; the
      // diagonal excludes self-pairs so singleton bins expect zero.
      const double e = a == b ? (mass[a] * mass[a] - mass_sq[a]) / (2.0 * two_m)
                              : mass[a] * mass[b] / two_m;
      model.expected[a][b] = e;
      model.expected[b][a] = e;
      const double aff = e > 0.0 ? model.observed[a][b] / e : 1.0;
      model.bin_affinity[a][b] = aff;
      model.bin_affinity[b][a] = aff;
    }
  }
  return model;
}

Graph generate_bcl(const BCLModel& model, Rng& rng, const GeneratorConfig& config) {
  if (model.degrees.total < 2) throw std::invalid_argument("degree sequence has no edge mass");
  const int n = static_cast<int>(model.degrees.degrees.size());
  const std::int64_t target = model.degrees.total / 2;

  const std::size_t nb = model.bins.size();
  std::vector<std::vector<double>> accept(nb, std::vector<double>(nb, 1.0));
  double max_aff = 0.0;
  for (std::size_t a = 0; a < nb; ++a)
    for (std::size_t b = 0; b < nb; ++b) {
      accept[a][b] = (model.observed[a][b] + 1.0) / (model.expected[a][b] + 1.0);
      max_aff = std::max(max_aff, accept[a][b]);
    }
  for (auto& row : accept)
    for (double& p : row) p /= max_aff;

  std::vector<int> node_bin(static_cast<std::size_t>(n), 0);
  for (int v = 0; v < n; ++v) node_bin[v] = model.bin_of(model.degrees.degrees[v]);

  const auto pins = build_pins(model.degrees.degrees);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(static_cast<std::size_t>(target) * 2);
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(target));

  for (std::int64_t e = 0; e < target; ++e) {
    for (int attempt = 0; attempt <= config.retry_cap; ++attempt) {
      const int u = pins[rng.index(pins.size())];
      const int v = pins[rng.index(pins.size())];
      if (u == v || seen.count(edge_key(u, v))) continue;
      const double p = accept[node_bin[u]][node_bin[v]];
      // An acceptance of exactly 1 spends no coin, so a uniform-affinity
      // model replays Chung-Lu draw-for-draw.
      if (p < 1.0 && rng.uniform01() >= p) continue;
      seen.insert(edge_key(u, v));
      edges.emplace_back(u, v);
      break;
    }
  }
  return Graph(n, edges);
}

CLModel fit_chung_lu(const Graph& g) {
  if (g.num_edges() < 1) throw std::invalid_argument("fit_chung_lu needs at least one edge");
  return CLModel{degree_sequence(g)};
}

TCLModel fit_tcl(const Graph& g, const TCLFitConfig& config, FitDiagnostics* diag) {
  if (g.num_edges() < 1) throw std::invalid_argument("fit_tcl needs at least one edge");

  TCLModel model;
  model.degrees = degree_sequence(g);
  const double target_cc = clustering_profile(g).global_mean;

  // Bisect rho against the mean global clustering of short pilot runs;
  // generated clustering is monotone in rho, which is all bisection needs.
  auto probe = [&](double rho, int step) {
    TCLModel candidate{model.degrees, rho};
    double acc = 0.0;
    for (int p = 0; p < config.pilots; ++p) {
      Rng pilot_rng(derive_seed(config.seed, {static_cast<std::uint64_t>(step),
                                              static_cast<std::uint64_t>(p)}));
      acc += clustering_profile(generate_tcl(candidate, pilot_rng)).global_mean;
    }
    return acc / std::max(1, config.pilots);
  };

  double lo = 0.0, hi = 1.0;
  for (int step = 0; step < config.em_iters; ++step) {
    const double mid = 0.5 * (lo + hi);
    if (probe(mid, step) < target_cc)
      lo = mid;
    else
      hi = mid;
  }
  model.rho = std::clamp(0.5 * (lo + hi), 0.0, 1.0);

  if (diag) {
    diag->model_kind = ModelKind::tcl;
    diag->converged = true;
    diag->notes = "rho bisection, " + std::to_string(config.em_iters) + " steps x " +
                  std::to_string(config.pilots) + " pilots";
  }
  return model;
}

BTERModel fit_bter(const Graph& g) {
  if (g.num_edges() < 1) throw std::invalid_argument("fit_bter needs at least one edge");

  BTERModel model;
  model.num_nodes = g.num_nodes();
  const auto cc = clustering_profile(g);

  std::map<int, std::int64_t> counts;
  std::map<int, std::pair<double, std::int64_t>> ccd_acc;
  for (int v = 0; v < g.num_nodes(); ++v) {
    const int d = g.degree(v);
    ++counts[d];
    auto& slot = ccd_acc[d];
    slot.first += cc.local[v];
    slot.second += 1;
  }
  model.degree_counts.assign(counts.begin(), counts.end());
  std::map<int, double> ccd;
  for (const auto& [d, acc] : ccd_acc) {
    ccd[d] = acc.first / static_cast<double>(acc.second);
    model.target_ccd.emplace_back(d, ccd[d]);
  }

  std::vector<int> order;
  for (int v = 0; v < g.num_nodes(); ++v)
    if (g.degree(v) >= 2) order.push_back(v);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return g.degree(a) < g.degree(b); });

  model.blocks.assign(static_cast<std::size_t>(g.num_nodes()), -1);
  model.excess_degrees.assign(static_cast<std::size_t>(g.num_nodes()), 0.0);
  for (int v = 0; v < g.num_nodes(); ++v)
    if (g.degree(v) == 1) model.excess_degrees[v] = 1.0;

  std::size_t i = 0;
  while (i < order.size()) {
    const int d_min = g.degree(order[i]);
    const std::size_t size = std::min(order.size() - i, static_cast<std::size_t>(d_min) + 1);
    const int block_id = static_cast<int>(model.block_members.size());
    const double p = std::cbrt(std::clamp(ccd[d_min], 0.0, 1.0));

    std::vector<int> members(order.begin() + i, order.begin() + i + size);
    for (int v : members) {
      model.blocks[v] = block_id;
      model.excess_degrees[v] =
          std::max(0.0, g.degree(v) - p * static_cast<double>(size - 1));
    }
    model.block_members.push_back(std::move(members));
    model.block_p.push_back(p);
    i += size;
  }
  return model;
}

Graph generate_bter(const BTERModel& model, Rng& rng, const GeneratorConfig& config) {
  double excess_total = 0.0;
  for (double x : model.excess_degrees) excess_total += x;
  if (model.block_members.empty() && excess_total <= 0.0)
    throw std::invalid_argument("BTER model carries no degree mass");

  std::vector<std::pair<int, int>> edges;

  // Phase 1: Erdos-Renyi inside each affinity block, geometric skipping so
  // p = 0 and p = 1 spend no randomness at all.
  for (std::size_t b = 0; b < model.block_members.size(); ++b) {
    const auto& members = model.block_members[b];
    const double p = model.block_p[b];
    const std::int64_t s = static_cast<std::int64_t>(members.size());
    if (s < 2 || p <= 0.0) continue;
    if (p >= 1.0) {
      for (std::int64_t i = 0; i < s; ++i)
        for (std::int64_t j = i + 1; j < s; ++j)
          edges.emplace_back(members[i], members[j]);
      continue;
    }
    const std::int64_t total_pairs = s * (s - 1) / 2;
    const double log1mp = std::log1p(-p);
    std::int64_t k = -1;
    std::int64_t row = 0, row_end = s - 1;  // pairs (row, row+1..s-1)
    while (true) {
      const double u = rng.uniform01();
      k += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-u) / log1mp));
      if (k >= total_pairs) break;
      while (k >= row_end) {
        ++row;
        row_end += s - 1 - row;
      }
      const std::int64_t col = row + 1 + (k - (row_end - (s - 1 - row)));
      edges.emplace_back(members[row], members[col]);
    }
  }

  // Phase 2: Chung-Lu on the residual (real-valued) degrees.
  const std::int64_t target = std::llround(excess_total / 2.0);
  if (target > 0) {
    std::vector<int> ids;
    std::vector<double> cum;
    double running = 0.0;
    for (std::size_t v = 0; v < model.excess_degrees.size(); ++v) {
      if (model.excess_degrees[v] <= 0.0) continue;
      ids.push_back(static_cast<int>(v));
      running += model.excess_degrees[v];
      cum.push_back(running);
    }
    auto draw = [&]() {
      const double r = rng.uniform01() * running;
      const auto it = std::upper_bound(cum.begin(), cum.end(), r);
      const std::size_t idx = std::min(static_cast<std::size_t>(it - cum.begin()),
                                       ids.size() - 1);
      return ids[idx];
    };
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(static_cast<std::size_t>(target) * 2);
    for (std::int64_t e = 0; e < target; ++e) {
      for (int attempt = 0; attempt <= config.retry_cap; ++attempt) {
        const int u = draw();
        const int v = draw();
        if (u == v || !seen.insert(edge_key(u, v)).second) continue;
        edges.emplace_back(u, v);
        break;
      }
    }
  }

  return Graph(model.num_nodes, edges);  // ctor collapses cross-phase duplicates
}

IdentityModel fit_identity(const Graph& g) { return IdentityModel{g}; }

FittedModel fit_model(const Graph& g, ModelKind kind, const FitOptions& options) {
  FittedModel out;
  out.diagnostics.model_kind = kind;
  const auto t0 = std::chrono::steady_clock::now();
  switch (kind) {
    case ModelKind::chung_lu: out.model = fit_chung_lu(g); break;
    case ModelKind::tcl: out.model = fit_tcl(g, options.tcl, &out.diagnostics); break;
    case ModelKind::bcl: out.model = fit_bcl(g, options.bcl); break;
    case ModelKind::kronecker:
      out.model = fit_kronecker(g, options.kron, &out.diagnostics);
      break;
    case ModelKind::bter: out.model = fit_bter(g); break;
    case ModelKind::identity: out.model = fit_identity(g); break;
  }
  out.diagnostics.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

Graph generate(const Model& model, Rng& rng, const GeneratorConfig& config) {
  return std::visit(
      [&](const auto& m) -> Graph {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, CLModel>) return generate_chung_lu(m, rng, config);
        if constexpr (std::is_same_v<T, TCLModel>) return generate_tcl(m, rng, config);
        if constexpr (std::is_same_v<T, BCLModel>) return generate_bcl(m, rng, config);
        if constexpr (std::is_same_v<T, KronModel>) return generate_kronecker(m, rng, config);
        if constexpr (std::is_same_v<T, BTERModel>) return generate_bter(m, rng, config);
        if constexpr (std::is_same_v<T, IdentityModel>) return m.graph;
      },
      model);
}

}  // namespace mirror
