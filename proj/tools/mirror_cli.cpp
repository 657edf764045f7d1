#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mirror/chain.hpp"
#include "mirror/report.hpp"

namespace {

struct CommonOpts {
  std::vector<std::string> inputs;
  std::uint64_t seed = 0;
  bool giant_component = false;
};

std::vector<mirror::DatasetInput> load_inputs(const CommonOpts& opts) {
  std::vector<mirror::DatasetInput> out;
  for (const auto& path : opts.inputs) {
    auto loaded = mirror::load_edge_list_file(path, {opts.giant_component});
    out.push_back({path, std::move(loaded.graph)});
  }
  return out;
}

void print_graph_summary(const std::string& name, const mirror::Graph& g) {
  const auto cc = mirror::clustering_profile(g);
  const auto ar = mirror::assortativity(g);
  std::printf("%s: n=%d m=%lld global_cc=%s transitivity=%s assortativity=%s\n",
              name.c_str(), g.num_nodes(), static_cast<long long>(g.num_edges()),
              mirror::format_double(cc.global_mean).c_str(),
              mirror::format_double(cc.transitivity).c_str(),
              ar.status == mirror::AssortativityStatus::zero_variance
                  ? "zero_variance"
                  : mirror::format_double(ar.global_r).c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"infinity mirror test for graph generators"};
  app.require_subcommand(1);

  CommonOpts run_opts, metrics_opts, compare_opts;
  std::vector<std::string> model_names;
  int depth = 10;
  int trials = 1;
  std::string run_out, metrics_out, compare_out;
  bool no_gcd = false;
  bool pairwise_gcd = false;

  auto* run = app.add_subcommand("run", "run fit/generate recurrence chains");
  run->add_option("--input", run_opts.inputs, "edge list path (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--model", model_names, "generator model (repeatable)")
      ->required()
      ->check(CLI::IsMember({"cl", "tcl", "bcl", "kron", "bter"}));
  run->add_option("--depth", depth, "recurrence depth k")->check(CLI::PositiveNumber);
  run->add_option("--trials", trials, "chains per (input, model)")
      ->check(CLI::PositiveNumber);
  run->add_option("--seed", run_opts.seed, "base seed");
  run->add_option("--out", run_out, "report directory")->required();
  run->add_flag("--giant-component", run_opts.giant_component,
                "reduce inputs to their largest component");
  run->add_flag("--no-gcd", no_gcd, "skip graphlet correlation distances");

  auto* metrics = app.add_subcommand("metrics", "metrics for a single graph");
  metrics->add_option("--input", metrics_opts.inputs, "edge list path (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  metrics->add_option("--out", metrics_out, "output directory for metric CSVs");
  metrics->add_option("--seed", metrics_opts.seed, "hop plot sampling seed");
  metrics->add_flag("--giant-component", metrics_opts.giant_component,
                    "reduce input to its largest component");
  metrics->add_flag("--gcd", pairwise_gcd, "print gcd of exactly two inputs");

  auto* compare = app.add_subcommand("compare", "compare two graphs metric by metric");
  compare->add_option("--input", compare_opts.inputs, "edge list path (exactly two)")
      ->required()
      ->check(CLI::ExistingFile);
  compare->add_option("--out", compare_out, "optional directory for per-graph CSVs");
  compare->add_option("--seed", compare_opts.seed, "hop plot sampling seed");
  compare->add_flag("--giant-component", compare_opts.giant_component,
                    "reduce inputs to their largest components");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) {
      auto inputs = load_inputs(run_opts);
      mirror::ExperimentConfig cfg;
      for (const auto& name : model_names)
        cfg.models.push_back(*mirror::parse_model_kind(name));
      cfg.depth = depth;
      cfg.trials = trials;
      cfg.seed = run_opts.seed;
      cfg.compute_gcd = !no_gcd;
      const auto result = mirror::run_experiment(inputs, cfg);
      mirror::emit_report(result, run_out);

      bool any_fit_failure = false;
      for (const auto& entry : result.chains) {
        std::printf("%s %s trial=%d %s terminal_level=%d\n",
                    result.dataset_names[entry.dataset_index].c_str(),
                    mirror::to_string(entry.model).c_str(), entry.trial,
                    mirror::to_string(entry.result.status).c_str(),
                    entry.result.terminal_level);
        any_fit_failure |= entry.result.status == mirror::ChainStatus::fit_failure;
      }
      return any_fit_failure ? 1 : 0;
    }

    if (metrics->parsed()) {
      auto inputs = load_inputs(metrics_opts);
      if (pairwise_gcd) {
        if (inputs.size() != 2) {
          std::fprintf(stderr, "--gcd needs exactly two --input graphs\n");
          return 2;
        }
        const double d =
            mirror::graphlet_correlation_distance(inputs[0].graph, inputs[1].graph);
        std::printf("%s\n", mirror::format_double(d).c_str());
        return 0;
      }
      if (inputs.size() != 1) {
        std::fprintf(stderr, "metrics mode takes exactly one --input graph\n");
        return 2;
      }
      if (metrics_out.empty()) {
        std::fprintf(stderr, "metrics mode needs --out\n");
        return 2;
      }
      mirror::emit_graph_metrics(inputs[0].graph, metrics_out, metrics_opts.seed);
      print_graph_summary(inputs[0].name, inputs[0].graph);
      return 0;
    }

    // compare
    auto inputs = load_inputs(compare_opts);
    if (inputs.size() != 2) {
      std::fprintf(stderr, "compare needs exactly two --input graphs\n");
      return 2;
    }
    print_graph_summary(inputs[0].name, inputs[0].graph);
    print_graph_summary(inputs[1].name, inputs[1].graph);
    const double d =
        mirror::graphlet_correlation_distance(inputs[0].graph, inputs[1].graph);
    std::printf("gcd=%s\n", mirror::format_double(d).c_str());
    if (!compare_out.empty()) {
      mirror::emit_graph_metrics(inputs[0].graph,
                                 std::filesystem::path(compare_out) / "a",
                                 compare_opts.seed);
      mirror::emit_graph_metrics(inputs[1].graph,
                                 std::filesystem::path(compare_out) / "b",
                                 compare_opts.seed);
    }
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
