#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mirror/graph.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

fs::path work_root() {
  static const fs::path root = [] {
    fs::path p = fs::temp_directory_path() /
                 ("mirror_cli_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_graph(const std::string& name, const mirror::Graph& g) {
  const fs::path p = work_root() / name;
  std::ofstream out(p);
  mirror::write_edge_list(g, out);
  return p;
}

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
};

RunResult run_cli(const std::string& args, const std::string& tag) {
  const fs::path out_file = work_root() / (tag + ".out");
  const std::string cmd = std::string(MIRROR_CLI_PATH) + " " + args + " > " +
                          out_file.string() + " 2> " + out_file.string() + ".err";
  const int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.stdout_text = slurp(out_file);
  return r;
}

}  // namespace

TEST_CASE("run emits a manifest and reports completed chains") {
  const auto input = write_graph("ring.txt", oracle::ring_lattice(40, 4));
  const fs::path out = work_root() / "run_basic";
  auto r = run_cli("run --input " + input.string() +
                       " --model cl --depth 2 --seed 5 --out " + out.string(),
                   "run_basic");
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("completed") != std::string::npos);
  REQUIRE(fs::exists(out / "manifest.json"));
  auto manifest = nlohmann::ordered_json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["chains"].size() == 1);
  CHECK(manifest["chains"][0]["status"] == "completed");
}

TEST_CASE("run covers the input x model x trial grid") {
  const auto a = write_graph("grid_a.txt", oracle::er_graph(25, 0.2, 1));
  const auto b = write_graph("grid_b.txt", oracle::ring_lattice(24, 4));
  const fs::path out = work_root() / "run_grid";
  auto r = run_cli("run --input " + a.string() + " --input " + b.string() +
                       " --model cl --model bter --trials 2 --depth 1 --seed 9 --out " +
                       out.string(),
                   "run_grid");
  CHECK(r.exit_code == 0);
  auto manifest = nlohmann::ordered_json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["chains"].size() == 8);
}

TEST_CASE("reruns with one seed produce identical reports") {
  const auto input = write_graph("rerun.txt", oracle::er_graph(30, 0.15, 44));
  const fs::path out1 = work_root() / "rerun_1";
  const fs::path out2 = work_root() / "rerun_2";
  const std::string tail = " --model cl --model tcl --depth 3 --seed 77 --out ";
  auto r1 = run_cli("run --input " + input.string() + tail + out1.string(), "rr1");
  auto r2 = run_cli("run --input " + input.string() + tail + out2.string(), "rr2");
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  CHECK(slurp(out1 / "manifest.json") == slurp(out2 / "manifest.json"));
  auto manifest = nlohmann::ordered_json::parse(slurp(out1 / "manifest.json"));
  for (const auto& f : manifest["files"]) {
    const std::string rel = f["path"].get<std::string>();
    CHECK(slurp(out1 / rel) == slurp(out2 / rel));
  }
}

TEST_CASE("a kron chain that cannot fit exits 1 but still writes results") {
  // complete graphs push the initiator against the upper clamp
  const auto input = write_graph("k16.txt", oracle::complete_graph(16));
  const fs::path out = work_root() / "run_kron_fail";
  auto r = run_cli("run --input " + input.string() +
                       " --model kron --depth 3 --seed 2 --out " + out.string(),
                   "kron_fail");
  CHECK(r.exit_code == 1);
  CHECK(r.stdout_text.find("fit_failure") != std::string::npos);
  REQUIRE(fs::exists(out / "manifest.json"));
  auto manifest = nlohmann::ordered_json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["chains"][0]["status"] == "fit_failure");
  CHECK(manifest["chains"][0]["failed_level"] == 1);
  // the level-0 record is still on disk
  const std::string dir = manifest["chains"][0]["directory"].get<std::string>();
  const std::string summary = slurp(out / dir / "summary.csv");
  CHECK(summary.find("\n0,16,120,") != std::string::npos);
}

TEST_CASE("invalid depth is a usage error") {
  const auto input = write_graph("depth0.txt", oracle::complete_graph(3));
  auto r = run_cli("run --input " + input.string() +
                       " --model cl --depth 0 --out " +
                       (work_root() / "nowhere").string(),
                   "depth0");
  CHECK(r.exit_code == 2);
}

TEST_CASE("missing input files are rejected before any work") {
  auto r = run_cli("run --input " + (work_root() / "no_such.txt").string() +
                       " --model cl --out " + (work_root() / "nowhere2").string(),
                   "missing");
  CHECK(r.exit_code == 2);
  r = run_cli("metrics --input " + (work_root() / "no_such.txt").string() +
                  " --out " + (work_root() / "nowhere3").string(),
              "missing2");
  CHECK(r.exit_code == 2);
}

TEST_CASE("metrics mode dumps per-graph csv families") {
  const auto input = write_graph("k3.txt", oracle::complete_graph(3));
  const fs::path out = work_root() / "metrics_k3";
  auto r = run_cli("metrics --input " + input.string() + " --out " + out.string(),
                   "metrics_k3");
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("global_cc=1") != std::string::npos);
  const std::string clustering = slurp(out / "clustering_by_degree.csv");
  CHECK(clustering == "level,degree,mean_local_cc\n0,2,1\n");
  CHECK(fs::exists(out / "orbits.csv"));
  CHECK(fs::exists(out / "gcm.csv"));
}

TEST_CASE("metrics --gcd prints the distance between two graphs") {
  const auto a = write_graph("gcd_a.txt", oracle::complete_graph(5));
  auto chord = oracle::cycle_graph(5);
  const auto b = write_graph("gcd_b.txt", chord);
  auto r = run_cli("metrics --gcd --input " + a.string() + " --input " + b.string(),
                   "gcd_two");
  CHECK(r.exit_code == 0);
  const double d = std::strtod(r.stdout_text.c_str(), nullptr);
  CHECK(d > 0.0);

  auto same = run_cli(
      "metrics --gcd --input " + a.string() + " --input " + a.string(), "gcd_same");
  CHECK(same.exit_code == 0);
  CHECK(std::strtod(same.stdout_text.c_str(), nullptr) == 0.0);

  auto bad = run_cli("metrics --gcd --input " + a.string(), "gcd_one");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("compare prints both summaries and the gcd") {
  const auto a = write_graph("cmp_a.txt", oracle::ring_lattice(20, 4));
  const auto b = write_graph("cmp_b.txt", oracle::er_graph(20, 0.2, 3));
  auto r = run_cli("compare --input " + a.string() + " --input " + b.string(),
                   "compare");
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("gcd=") != std::string::npos);
  CHECK(r.stdout_text.find("n=20") != std::string::npos);
}

TEST_CASE("a depth-10 chung-lu chain on the worm graph finishes promptly") {
  const auto input = write_graph("celegans.txt", oracle::celegans_fixture());
  const fs::path out = work_root() / "run_worm";
  const auto t0 = std::chrono::steady_clock::now();
  auto r = run_cli("run --input " + input.string() +
                       " --model cl --depth 10 --seed 1 --out " + out.string(),
                   "worm");
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(r.exit_code == 0);
  CHECK(secs < 60.0);
  auto manifest = nlohmann::ordered_json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["chains"][0]["terminal_level"] == 10);
}
