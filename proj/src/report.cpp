#include "mirror/report.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

#include "mirror/graphlets.hpp"

namespace mirror {

std::string sha256_hex(std::string_view data) {
  static constexpr std::uint32_t K[64] = {
      0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1,
      0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3,
      0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786,
      0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
      0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
      0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13,
      0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
      0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
      0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a,
      0x5b9cca4f, 0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
      0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};

  std::uint32_t h[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                        0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};

  std::string msg(data);
  const std::uint64_t bit_len = static_cast<std::uint64_t>(msg.size()) * 8;
  msg.push_back('\x80');
  while (msg.size() % 64 != 56) msg.push_back('\0');
  for (int i = 7; i >= 0; --i)
    msg.push_back(static_cast<char>((bit_len >> (8 * i)) & 0xff));

  const auto rotr = [](std::uint32_t x, int s) { return (x >> s) | (x << (32 - s)); };
  for (std::size_t off = 0; off < msg.size(); off += 64) {
    std::uint32_t w[64];
    for (int i = 0; i < 16; ++i)
      w[i] = (static_cast<std::uint32_t>(static_cast<std::uint8_t>(msg[off + 4 * i])) << 24) |
             (static_cast<std::uint32_t>(static_cast<std::uint8_t>(msg[off + 4 * i + 1])) << 16) |
             (static_cast<std::uint32_t>(static_cast<std::uint8_t>(msg[off + 4 * i + 2])) << 8) |
             static_cast<std::uint32_t>(static_cast<std::uint8_t>(msg[off + 4 * i + 3]));
    for (int i = 16; i < 64; ++i) {
      const std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
      const std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
      w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }
    std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3];
    std::uint32_t e = h[4], f = h[5], g = h[6], hh = h[7];
    for (int i = 0; i < 64; ++i) {
      const std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
      const std::uint32_t ch = (e & f) ^ (~e & g);
      const std::uint32_t t1 = hh + s1 + ch + K[i] + w[i];
      const std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
      const std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
      const std::uint32_t t2 = s0 + maj;
      hh = g;
      g = f;
      f = e;
      e = d + t1;
      d = c;
      c = b;
      b = a;
      a = t1 + t2;
    }
    h[0] += a; h[1] += b; h[2] += c; h[3] += d;
    h[4] += e; h[5] += f; h[6] += g; h[7] += hh;
  }

  char out[65];
  for (int i = 0; i < 8; ++i) std::snprintf(out + 8 * i, 9, "%08x", h[i]);
  return std::string(out, 64);
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string sanitize_name(const std::string& name) {
  std::string stem = std::filesystem::path(name).stem().string();
  if (stem.empty()) stem = "dataset";
  for (char& c : stem)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') c = '_';
  return stem;
}

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct Emitter {
  fs::path root;
  std::vector<std::pair<std::string, std::string>> files;  // rel path, sha256

  void write(const std::string& rel, const std::string& content) {
    const fs::path p = root / rel;
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + p.string());
    out << content;
    out.close();
    if (!out) throw std::runtime_error("write failed: " + p.string());
    files.emplace_back(rel, sha256_hex(content));
  }
};

std::string seed_str(std::uint64_t seed) { return std::to_string(seed); }

std::string degree_csv(const std::vector<MetricRecord>& recs) {
  std::string out = "level,degree,count,ccdf\n";
  for (const auto& r : recs)
    for (std::size_t i = 0; i < r.degree_distribution.histogram.size(); ++i) {
      const auto& [deg, cnt] = r.degree_distribution.histogram[i];
      out += std::to_string(r.level) + ',' + std::to_string(deg) + ',' +
             std::to_string(cnt) + ',' +
             format_double(r.degree_distribution.ccdf[i].second) + '\n';
    }
  return out;
}

std::string centrality_csv(const std::vector<MetricRecord>& recs) {
  std::string out = "level,rank,value\n";
  for (const auto& r : recs)
    for (std::size_t i = 0; i < r.centrality.sorted_view.size(); ++i)
      out += std::to_string(r.level) + ',' + std::to_string(i) + ',' +
             format_double(r.centrality.sorted_view[i]) + '\n';
  return out;
}

std::string hop_csv(const std::vector<MetricRecord>& recs) {
  std::string out = "level,hops,reachable_pairs\n";
  for (const auto& r : recs)
    for (std::size_t h = 0; h < r.hop_plot.counts.size(); ++h)
      out += std::to_string(r.level) + ',' + std::to_string(h) + ',' +
             std::to_string(r.hop_plot.counts[h]) + '\n';
  return out;
}

std::string clustering_csv(const std::vector<MetricRecord>& recs) {
  std::string out = "level,degree,mean_local_cc\n";
  for (const auto& r : recs)
    for (const auto& [deg, cc] : r.clustering_profile.by_degree)
      out += std::to_string(r.level) + ',' + std::to_string(deg) + ',' +
             format_double(cc) + '\n';
  return out;
}

std::string assortativity_csv(const std::vector<MetricRecord>& recs) {
  std::string out = "level,node,local_assortativity\n";
  for (const auto& r : recs)
    for (std::size_t v = 0; v < r.assortativity_report.local.size(); ++v)
      out += std::to_string(r.level) + ',' + std::to_string(v) + ',' +
             format_double(r.assortativity_report.local[v]) + '\n';
  return out;
}

std::string summary_csv(const std::vector<MetricRecord>& recs) {
  std::string out =
      "level,n,m,global_clustering,transitivity,assortativity_r,"
      "assortativity_status,centrality_converged,gcd_to_original\n";
  for (const auto& r : recs) {
    const bool zero_var =
        r.assortativity_report.status == AssortativityStatus::zero_variance;
    out += std::to_string(r.level) + ',' + std::to_string(r.n) + ',' +
           std::to_string(r.m) + ',' +
           format_double(r.clustering_profile.global_mean) + ',' +
           format_double(r.clustering_profile.transitivity) + ',' +
           format_double(zero_var ? 0.0 : r.assortativity_report.global_r) + ',' +
           (zero_var ? "zero_variance" : "ok") + ',' +
           (r.centrality.converged ? "true" : "false") + ',' +
           format_double(r.gcd_to_original) + '\n';
  }
  return out;
}

json diagnostics_to_json(const FitDiagnostics& d) {
  json j;
  j["model_kind"] = to_string(d.model_kind);
  j["converged"] = d.converged;
  j["notes"] = d.notes;
  j["log_likelihood_trace"] = d.log_likelihood_trace;
  return j;
}

json model_to_json(const Model& model) {
  json p;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, CLModel>) {
          p["degrees"] = m.degrees.degrees;
          p["total_degree"] = m.degrees.total;
        } else if constexpr (std::is_same_v<T, TCLModel>) {
          p["degrees"] = m.degrees.degrees;
          p["total_degree"] = m.degrees.total;
          p["rho"] = m.rho;
        } else if constexpr (std::is_same_v<T, BCLModel>) {
          p["degrees"] = m.degrees.degrees;
          p["total_degree"] = m.degrees.total;
          p["bins"] = m.bins;
          p["bin_affinity"] = m.bin_affinity;
          p["observed"] = m.observed;
          p["expected"] = m.expected;
        } else if constexpr (std::is_same_v<T, KronModel>) {
          p["initiator"] = m.initiator;
          p["x"] = m.x;
        } else if constexpr (std::is_same_v<T, BTERModel>) {
          json dc = json::array();
          for (const auto& [d, c] : m.degree_counts) dc.push_back({d, c});
          json cc = json::array();
          for (const auto& [d, v] : m.target_ccd) cc.push_back({d, v});
          p["degree_counts"] = dc;
          p["target_ccd"] = cc;
          p["blocks"] = m.blocks;
          p["block_p"] = m.block_p;
          p["excess_degrees"] = m.excess_degrees;
          p["num_nodes"] = m.num_nodes;
        } else if constexpr (std::is_same_v<T, IdentityModel>) {
          p["n"] = m.graph.num_nodes();
          p["m"] = m.graph.num_edges();
        }
      },
      model);
  return p;
}

void emit_chain(Emitter& em, const std::string& base, const ChainEntry& entry) {
  const ChainResult& r = entry.result;
  em.write(base + "/degree_ccdf.csv", degree_csv(r.records));
  em.write(base + "/centrality.csv", centrality_csv(r.records));
  em.write(base + "/hop_plot.csv", hop_csv(r.records));
  em.write(base + "/clustering_by_degree.csv", clustering_csv(r.records));
  em.write(base + "/assortativity_local.csv", assortativity_csv(r.records));
  em.write(base + "/summary.csv", summary_csv(r.records));

  for (std::size_t i = 0; i < r.models.size(); ++i) {
    json mj;
    mj["kind"] = to_string(model_kind(r.models[i]));
    mj["parameters"] = model_to_json(r.models[i]);
    mj["fit_diagnostics"] = diagnostics_to_json(r.fit_diagnostics[i]);
    mj["source_graph_hash"] = seed_str(r.model_source_hashes[i]);
    em.write(base + "/models/level_" + std::to_string(i + 1) + ".json",
             mj.dump(2) + "\n");
  }

  for (const auto& [level, graph] : r.snapshots)
    em.write(base + "/snapshots/level_" + std::to_string(level) + ".edges",
             to_edge_list(graph));
}

}  // namespace

nlohmann::ordered_json emit_report(const ExperimentResult& result,
                                   const std::filesystem::path& dir) {
  fs::create_directories(dir);
  Emitter em{dir, {}};

  // Unique directory per dataset, stable across reruns.
  std::vector<std::string> ds_dirs;
  std::map<std::string, int> used;
  for (const auto& name : result.dataset_names) {
    std::string base = sanitize_name(name);
    const int n = used[base]++;
    if (n > 0) base += "_" + std::to_string(n + 1);
    ds_dirs.push_back(base);
  }

  json chains = json::array();
  for (const auto& entry : result.chains) {
    const std::string base = ds_dirs[entry.dataset_index] + "/" +
                             to_string(entry.model) + "/trial_" +
                             std::to_string(entry.trial);
    emit_chain(em, base, entry);

    json cj;
    cj["dataset"] = result.dataset_names[entry.dataset_index];
    cj["model"] = to_string(entry.model);
    cj["trial"] = entry.trial;
    cj["directory"] = base;
    cj["seed"] = seed_str(entry.seed);
    cj["hop_seed"] = seed_str(entry.result.hop_seed);
    json seeds = json::array();
    for (std::uint64_t s : entry.result.level_seeds) seeds.push_back(seed_str(s));
    cj["level_seeds"] = seeds;
    cj["status"] = to_string(entry.result.status);
    cj["terminal_level"] = entry.result.terminal_level;
    cj["failed_level"] = entry.result.failed_level;
    cj["failure_note"] = entry.result.failure_note;
    chains.push_back(cj);
  }

  if (result.config.compute_gcd) {
    for (std::size_t d = 0; d < result.dataset_names.size(); ++d)
      for (std::size_t mi = 0; mi < result.config.models.size(); ++mi) {
        std::string csv = "level,mean,min,max,trials\n";
        for (const auto& row : result.gcd_summaries[d][mi])
          csv += std::to_string(row.level) + ',' + format_double(row.mean) + ',' +
                 format_double(row.min) + ',' + format_double(row.max) + ',' +
                 std::to_string(row.trials) + '\n';
        em.write(ds_dirs[d] + "/" + to_string(result.config.models[mi]) +
                     "/gcd_vs_level.csv",
                 csv);
      }
  }

  json manifest;
  json cfg;
  cfg["seed"] = seed_str(result.config.seed);
  cfg["depth"] = result.config.depth;
  cfg["trials"] = result.config.trials;
  json models = json::array();
  for (ModelKind k : result.config.models) models.push_back(to_string(k));
  cfg["models"] = models;
  cfg["record_levels"] = result.config.record_levels;
  cfg["gcd"] = result.config.compute_gcd;
  cfg["hop_plot_sources"] = result.config.hop_plot_sources;
  cfg["retry_cap"] = result.config.generator.retry_cap;
  manifest["config"] = cfg;

  json datasets = json::array();
  for (std::size_t d = 0; d < result.dataset_names.size(); ++d) {
    json dj;
    dj["name"] = result.dataset_names[d];
    dj["directory"] = ds_dirs[d];
    for (const auto& entry : result.chains) {
      if (entry.dataset_index != static_cast<int>(d)) continue;
      dj["n"] = entry.result.records.front().n;
      dj["m"] = entry.result.records.front().m;
      break;
    }
    datasets.push_back(dj);
  }
  manifest["datasets"] = datasets;
  manifest["chains"] = chains;

  std::sort(em.files.begin(), em.files.end());
  json files = json::array();
  for (const auto& [path, sha] : em.files) {
    json fj;
    fj["path"] = path;
    fj["sha256"] = sha;
    files.push_back(fj);
  }
  manifest["files"] = files;

  {
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest.json");
    out << manifest.dump(2) << "\n";
  }
  return manifest;
}

void emit_graph_metrics(const Graph& g, const std::filesystem::path& dir,
                        std::uint64_t seed, int hop_sources) {
  fs::create_directories(dir);
  Emitter em{dir, {}};

  MetricRecord rec;
  rec.level = 0;
  rec.n = g.num_nodes();
  rec.m = g.num_edges();
  rec.degree_distribution = degree_distribution(g);
  rec.centrality = eigenvector_centrality(g);
  Rng hop_rng(derive_seed(seed, {hash64("hop")}));
  rec.hop_plot = hop_plot(g, hop_sources, hop_rng);
  rec.clustering_profile = clustering_profile(g);
  rec.assortativity_report = assortativity(g);

  const std::vector<MetricRecord> recs{rec};
  em.write("degree_ccdf.csv", degree_csv(recs));
  em.write("centrality.csv", centrality_csv(recs));
  em.write("hop_plot.csv", hop_csv(recs));
  em.write("clustering_by_degree.csv", clustering_csv(recs));
  em.write("assortativity_local.csv", assortativity_csv(recs));
  em.write("summary.csv", summary_csv(recs));

  const OrbitCounts orbits = count_orbits(g);
  std::string orbit_csv = "node";
  for (int o = 0; o < kNumOrbits; ++o) orbit_csv += ",o" + std::to_string(o);
  orbit_csv += '\n';
  for (int v = 0; v < orbits.num_nodes(); ++v) {
    orbit_csv += std::to_string(v);
    for (int o = 0; o < kNumOrbits; ++o)
      orbit_csv += ',' + std::to_string(orbits.counts[v][o]);
    orbit_csv += '\n';
  }
  em.write("orbits.csv", orbit_csv);

  const CorrelationMatrix cm = graphlet_correlation_matrix(orbits);
  std::string gcm_csv;
  for (std::size_t i = 0; i < kGcdOrbits.size(); ++i)
    gcm_csv += std::string(i ? "," : "") + "o" + std::to_string(kGcdOrbits[i]);
  gcm_csv += '\n';
  for (std::size_t i = 0; i < 11; ++i) {
    for (std::size_t j = 0; j < 11; ++j)
      gcm_csv += (j ? "," : "") + format_double(cm[i][j]);
    gcm_csv += '\n';
  }
  em.write("gcm.csv", gcm_csv);
}

}  // namespace mirror
