// Acceptance gate: one PASS/FAIL line per criterion, exit 0 only when all
// criteria hold at their stated tolerances and time budgets.
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mirror/chain.hpp"
#include "mirror/report.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Checker {
  int failures = 0;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& msg) {
    if (ok) return;
    ++failures;
    if (notes.size() < 6) notes.push_back(msg);
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return {};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- criterion 1: gcd identity / symmetry / permutation invariance -------

void criterion_gcd_axioms(Checker& ck) {
  mirror::Rng perm_rng(42);
  const double ps[3] = {0.08, 0.18, 0.35};
  for (int i = 0; i < 50; ++i) {
    const int n = 12 + (i * 7) % 49;  // <= 60
    auto g = oracle::er_graph(n, ps[i % 3], 9000 + static_cast<std::uint64_t>(i));
    auto h = oracle::er_graph(n, 0.25, 12000 + static_cast<std::uint64_t>(i));
    ck.expect(mirror::graphlet_correlation_distance(g, g) == 0.0,
              "gcd(G,G) != 0 at i=" + std::to_string(i));
    const double gh = mirror::graphlet_correlation_distance(g, h);
    const double hg = mirror::graphlet_correlation_distance(h, g);
    ck.expect(std::abs(gh - hg) < 1e-12,
              "gcd asymmetry " + std::to_string(gh - hg) + " at i=" + std::to_string(i));
    auto pg = oracle::permute_graph(g, perm_rng);
    ck.expect(mirror::graphlet_correlation_distance(g, pg) == 0.0,
              "gcd(G,pi(G)) != 0 at i=" + std::to_string(i));
  }
}

// ---- criterion 2: orbit counts vs exhaustive enumeration -----------------

void criterion_orbits_exact(Checker& ck) {
  const double ps[3] = {0.1, 0.3, 0.6};
  for (int i = 0; i < 100; ++i) {
    const int n = 8 + (i * 5) % 23;  // <= 30
    auto g = oracle::er_graph(n, ps[i % 3], 31000 + static_cast<std::uint64_t>(i));
    const auto lib = mirror::count_orbits(g);
    const auto ref = oracle::orbit_counts(g);
    for (int v = 0; v < g.num_nodes(); ++v)
      for (int o = 0; o < mirror::kNumOrbits; ++o)
        ck.expect(lib.counts[v][o] == ref[v][o],
                  "orbit mismatch graph " + std::to_string(i) + " node " +
                      std::to_string(v) + " o" + std::to_string(o));
  }
}

// ---- criterion 3: chung-lu expected-degree preservation -------------------

void criterion_cl_degrees(Checker& ck) {
  auto fixture = oracle::powerlaw_fixture();
  auto model = mirror::fit_chung_lu(fixture);
  const int trials = 200;
  std::vector<double> mean_deg(fixture.num_nodes(), 0.0);
  for (int t = 0; t < trials; ++t) {
    mirror::Rng rng(mirror::derive_seed(90210, {static_cast<std::uint64_t>(t)}));
    auto g = mirror::generate_chung_lu(model, rng, {});
    for (int v = 0; v < g.num_nodes(); ++v) mean_deg[v] += g.degree(v);
  }
  for (int v = 0; v < fixture.num_nodes(); ++v) {
    const int d = fixture.degree(v);
    if (d < 5) continue;
    const double mean = mean_deg[v] / trials;
    ck.expect(std::abs(mean - d) <= 0.10 * d,
              "node " + std::to_string(v) + " degree " + std::to_string(d) +
                  " mean " + std::to_string(mean));
  }
}

// ---- criterion 4: kronecker structural contract + plant and recover ------

void criterion_kronecker(Checker& ck) {
  for (int x : {1, 2, 3, 4, 6}) {
    mirror::KronModel m{{0.9, 0.6, 0.6, 0.2}, x};
    mirror::Rng rng(17);
    ck.expect(mirror::generate_kronecker(m, rng, {}).num_nodes() == (1 << x),
              "node count not 2^" + std::to_string(x));
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    mirror::KronModel ones{{1.0, 1.0, 1.0, 1.0}, 2};
    mirror::Rng rng(seed);
    auto g = mirror::generate_kronecker(ones, rng, {});
    ck.expect(g.num_nodes() == 4 && g.num_edges() == 6,
              "all-ones x=2 not K4 at seed " + std::to_string(seed));
  }

  const std::array<double, 4> planted{0.9, 0.6, 0.6, 0.2};
  std::array<std::vector<double>, 4> recovered;
  for (std::uint64_t t = 0; t < 5; ++t) {
    mirror::KronModel pm{planted, 8};  // n = 256
    mirror::Rng rng(mirror::derive_seed(777, {t}));
    auto sample = mirror::generate_kronecker(pm, rng, {});
    mirror::KronFitConfig cfg;
    cfg.seed = mirror::derive_seed(778, {t});
    std::array<double, 4> theta{};
    try {
      theta = mirror::fit_kronecker(sample, cfg).initiator;
    } catch (const mirror::FitFailure& f) {
      theta = std::get<mirror::KronModel>(f.partial_model).initiator;
    }
    for (int i = 0; i < 4; ++i) recovered[i].push_back(theta[i]);
  }
  for (int i = 0; i < 4; ++i) {
    std::sort(recovered[i].begin(), recovered[i].end());
    const double median = recovered[i][2];
    ck.expect(std::abs(median - planted[i]) <= 0.15,
              "theta[" + std::to_string(i) + "] median " + std::to_string(median) +
                  " vs planted " + std::to_string(planted[i]));
  }
}

// ---- criterion 5: metric oracles ------------------------------------------

void criterion_metric_oracles(Checker& ck) {
  for (int i = 0; i < 20; ++i) {
    const int n = 30 + (i * 9) % 71;  // <= 100
    auto g = oracle::random_m_graph(n, 2 * n, 50000 + static_cast<std::uint64_t>(i));
    const auto lib = mirror::eigenvector_centrality(g);
    const auto ref = oracle::eigen_centrality(g);
    for (int v = 0; v < n; ++v)
      ck.expect(std::abs(lib.values[v] - ref[v]) <= 1e-6,
                "centrality off at graph " + std::to_string(i) + " node " +
                    std::to_string(v));
  }

  for (int i = 0; i < 20; ++i) {
    auto g = oracle::random_m_graph(40 + i, 70 + 3 * i,
                                    61000 + static_cast<std::uint64_t>(i));
    const auto lib = mirror::assortativity(g);
    const double ref = oracle::assortativity(g);
    if (std::isnan(ref)) {
      ck.expect(lib.status == mirror::AssortativityStatus::zero_variance,
                "missing zero_variance at " + std::to_string(i));
    } else {
      ck.expect(lib.status == mirror::AssortativityStatus::ok,
                "unexpected zero_variance at " + std::to_string(i));
      ck.expect(std::abs(lib.global_r - ref) <= 1e-9,
                "assortativity off by " + std::to_string(lib.global_r - ref));
    }
  }
  const auto star = mirror::assortativity(oracle::star_graph(12));
  ck.expect(star.status == mirror::AssortativityStatus::ok &&
                std::abs(star.global_r + 1.0) <= 1e-9,
            "star assortativity not -1");

  int hop_graph = 0;
  for (const auto& g :
       {oracle::er_graph(150, 0.02, 3), oracle::er_graph(200, 0.05, 4),
        oracle::ring_lattice(120, 4), oracle::star_graph(49)}) {
    mirror::Rng rng(1);
    const auto lib = mirror::hop_plot(g, g.num_nodes(), rng);
    ck.expect(lib.counts == oracle::all_pairs_hop_counts(g),
              "hop plot mismatch on graph " + std::to_string(hop_graph));
    ++hop_graph;
  }

  for (int i = 0; i < 10; ++i) {
    auto g = oracle::er_graph(12 + i, 0.25, 71000 + static_cast<std::uint64_t>(i));
    const auto lib = mirror::clustering_profile(g);
    const auto ref = oracle::local_clustering(g);
    for (int v = 0; v < g.num_nodes(); ++v)
      ck.expect(lib.local[v] == ref[v], "clustering not exact at graph " +
                                            std::to_string(i) + " node " +
                                            std::to_string(v));
  }
}

// ---- criterion 6: identity fixed point ------------------------------------

bool records_identical(const mirror::MetricRecord& a, const mirror::MetricRecord& b) {
  return a.n == b.n && a.m == b.m &&
         a.degree_distribution.histogram == b.degree_distribution.histogram &&
         a.degree_distribution.ccdf == b.degree_distribution.ccdf &&
         a.centrality.values == b.centrality.values &&
         a.centrality.sorted_view == b.centrality.sorted_view &&
         a.centrality.converged == b.centrality.converged &&
         a.hop_plot.counts == b.hop_plot.counts &&
         a.hop_plot.sources == b.hop_plot.sources &&
         a.clustering_profile.local == b.clustering_profile.local &&
         a.clustering_profile.global_mean == b.clustering_profile.global_mean &&
         a.clustering_profile.transitivity == b.clustering_profile.transitivity &&
         a.clustering_profile.by_degree == b.clustering_profile.by_degree &&
         a.assortativity_report.status == b.assortativity_report.status &&
         a.assortativity_report.global_r == b.assortativity_report.global_r &&
         a.assortativity_report.local == b.assortativity_report.local;
}

void criterion_identity_fixed_point(Checker& ck) {
  mirror::ChainConfig cc;
  cc.model_kind = mirror::ModelKind::identity;
  cc.depth = 10;
  cc.seed = 31;
  auto res = mirror::run_chain(oracle::er_graph(60, 0.08, 88), cc);
  ck.expect(res.status == mirror::ChainStatus::completed, "identity chain broke");
  ck.expect(res.records.size() == 11, "identity chain did not reach depth 10");
  for (const auto& rec : res.records) {
    ck.expect(rec.gcd_to_original == 0.0,
              "nonzero gcd at level " + std::to_string(rec.level));
    ck.expect(records_identical(rec, res.records[0]),
              "record drift at level " + std::to_string(rec.level));
  }
}

// ---- criteria 7 + 8: worm-graph end-to-end run and its determinism -------

mirror::ExperimentResult run_worm_experiment() {
  std::vector<mirror::DatasetInput> inputs;
  inputs.push_back({"celegans", oracle::celegans_fixture()});
  mirror::ExperimentConfig ec;
  ec.models = {mirror::ModelKind::chung_lu, mirror::ModelKind::bter,
               mirror::ModelKind::kronecker};
  ec.depth = 10;
  ec.trials = 1;
  ec.seed = 20260818;
  return mirror::run_experiment(inputs, ec);
}

int count_levels(const std::string& csv, int column_limit) {
  (void)column_limit;
  std::set<int> levels;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    levels.insert(std::atoi(line.c_str()));
  }
  return static_cast<int>(levels.size());
}

void criterion_worm_chains(Checker& ck, fs::path& out_dir) {
  auto base = oracle::celegans_fixture();
  ck.expect(base.num_nodes() == 269 && base.num_edges() == 2965,
            "fixture is not 269/2965");

  auto result = run_worm_experiment();
  out_dir = fs::temp_directory_path() /
            ("mirror_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(out_dir);
  auto manifest = mirror::emit_report(result, out_dir);

  ck.expect(result.chains.size() == 3, "expected 3 chains");
  for (const auto& entry : result.chains) {
    const bool ok_status =
        entry.result.status == mirror::ChainStatus::completed ||
        (entry.model == mirror::ModelKind::kronecker &&
         entry.result.status == mirror::ChainStatus::fit_failure);
    ck.expect(ok_status, mirror::to_string(entry.model) + " chain status " +
                             mirror::to_string(entry.result.status));
    if (entry.model != mirror::ModelKind::kronecker)
      ck.expect(entry.result.terminal_level == 10,
                mirror::to_string(entry.model) + " stopped at level " +
                    std::to_string(entry.result.terminal_level));

    const fs::path dir =
        out_dir / "celegans" / mirror::to_string(entry.model) / "trial_0";
    const int want = entry.result.terminal_level + 1;
    for (const char* family :
         {"degree_ccdf.csv", "centrality.csv", "hop_plot.csv",
          "clustering_by_degree.csv", "assortativity_local.csv", "summary.csv"}) {
      const std::string text = slurp(dir / family);
      ck.expect(!text.empty(), std::string(family) + " missing for " +
                                   mirror::to_string(entry.model));
      ck.expect(count_levels(text, 0) == want,
                std::string(family) + " does not cover all levels for " +
                    mirror::to_string(entry.model));
    }
  }

  // gcd-vs-level table exists for every recurrence
  for (const auto& entry : result.chains) {
    const fs::path p = out_dir / "celegans" / mirror::to_string(entry.model) /
                       "gcd_vs_level.csv";
    const std::string text = slurp(p);
    ck.expect(!text.empty(), "gcd_vs_level.csv missing for " +
                                 mirror::to_string(entry.model));
    ck.expect(count_levels(text, 0) == entry.result.terminal_level,
              "gcd table does not cover the " + mirror::to_string(entry.model) +
                  " recurrence");
  }
  (void)manifest;
}

void criterion_determinism(Checker& ck, const fs::path& first_dir) {
  if (first_dir.empty() || !fs::exists(first_dir / "manifest.json")) {
    ck.expect(false, "criterion 7 left no report to compare");
    return;
  }
  auto result = run_worm_experiment();
  const fs::path rerun_dir = first_dir.string() + "_rerun";
  fs::remove_all(rerun_dir);
  auto manifest2 = mirror::emit_report(result, rerun_dir);

  auto manifest1 = json::parse(slurp(first_dir / "manifest.json"));
  std::map<std::string, std::string> h1, h2;
  for (const auto& f : manifest1["files"])
    h1[f["path"].get<std::string>()] = f["sha256"].get<std::string>();
  for (const auto& f : manifest2["files"])
    h2[f["path"].get<std::string>()] = f["sha256"].get<std::string>();
  ck.expect(!h1.empty(), "first run emitted no files");
  ck.expect(h1 == h2, "content hashes differ between reruns");
  ck.expect(slurp(first_dir / "manifest.json") == slurp(rerun_dir / "manifest.json"),
            "manifests differ between reruns");
  fs::remove_all(first_dir);
  fs::remove_all(rerun_dir);
}

// ---- criterion 9: reduction properties -------------------------------------

void criterion_reductions(Checker& ck) {
  auto base = oracle::celegans_fixture();
  auto cl = mirror::fit_chung_lu(base);

  mirror::TCLModel tcl{cl.degrees, 0.0};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    mirror::Rng r1(seed), r2(seed);
    ck.expect(mirror::generate_chung_lu(cl, r1, {}).edges() ==
                  mirror::generate_tcl(tcl, r2, {}).edges(),
              "tcl rho=0 diverged from cl at seed " + std::to_string(seed));
  }

  auto bcl = mirror::fit_bcl(base);
  bcl.observed = bcl.expected;
  for (auto& row : bcl.bin_affinity)
    for (double& v : row) v = 1.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    mirror::Rng r1(seed), r2(seed);
    ck.expect(mirror::generate_chung_lu(cl, r1, {}).edges() ==
                  mirror::generate_bcl(bcl, r2, {}).edges(),
              "uniform bcl diverged from cl at seed " + std::to_string(seed));
  }

  // zero target clustering: BTER collapses to its phase-2 chung-lu stage
  auto flat = oracle::bipartite_fixture(100, 100, 5, 5150);
  auto bter = mirror::fit_bter(flat);
  for (auto [d, cc] : bter.target_ccd)
    ck.expect(cc == 0.0, "triangle-free fixture has nonzero target ccd");
  auto flat_cl = mirror::fit_chung_lu(flat);
  std::vector<double> bter_degrees, cl_degrees;
  for (int t = 0; t < 50; ++t) {
    mirror::Rng r1(mirror::derive_seed(9100, {static_cast<std::uint64_t>(t)}));
    mirror::Rng r2(mirror::derive_seed(9200, {static_cast<std::uint64_t>(t)}));
    auto a = mirror::generate_bter(bter, r1, {});
    auto b = mirror::generate_chung_lu(flat_cl, r2, {});
    for (int v = 0; v < a.num_nodes(); ++v) bter_degrees.push_back(a.degree(v));
    for (int v = 0; v < b.num_nodes(); ++v) cl_degrees.push_back(b.degree(v));
  }
  const double p = oracle::ks_p_value(bter_degrees, cl_degrees);
  ck.expect(p > 0.01, "ks p-value " + std::to_string(p));
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    double budget_seconds;  // 0: no stated budget
    std::function<void(Checker&)> fn;
  };

  fs::path worm_report_dir;
  const std::vector<Criterion> criteria = {
      {1, "gcd identity, symmetry, permutation invariance", 30, criterion_gcd_axioms},
      {2, "orbit counts match exhaustive enumeration", 60, criterion_orbits_exact},
      {3, "chung-lu preserves expected degrees", 60, criterion_cl_degrees},
      {4, "kronecker structural contract and plant-recover", 600, criterion_kronecker},
      {5, "metric implementations match dense oracles", 60, criterion_metric_oracles},
      {6, "identity model is a fixed point at k=10", 0, criterion_identity_fixed_point},
      {7, "worm-graph end-to-end chains at k=10", 900,
       [&](Checker& ck) { criterion_worm_chains(ck, worm_report_dir); }},
      {8, "rerun emits identical content hashes", 0,
       [&](Checker& ck) { criterion_determinism(ck, worm_report_dir); }},
      {9, "tcl/bcl/bter reduce to chung-lu", 0, criterion_reductions},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    Checker ck;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.fn(ck);
    } catch (const std::exception& e) {
      ck.expect(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_seconds > 0 && secs > c.budget_seconds)
      ck.expect(false, "over time budget (" + std::to_string(secs) + "s > " +
                           std::to_string(c.budget_seconds) + "s)");
    const bool pass = ck.failures == 0;
    failed += pass ? 0 : 1;
    std::printf("criterion %d: %s (%.1fs) %s\n", c.id, pass ? "PASS" : "FAIL",
                secs, c.name.c_str());
    for (const auto& note : ck.notes) std::printf("    - %s\n", note.c_str());
    if (ck.failures > static_cast<int>(ck.notes.size()))
      std::printf("    - (%d further failed checks)\n",
                  ck.failures - static_cast<int>(ck.notes.size()));
    std::fflush(stdout);
  }

  std::printf("%d/9 criteria passed\n", 9 - failed);
  return failed == 0 ? 0 : 1;
}
