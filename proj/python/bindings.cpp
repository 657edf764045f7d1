#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mirror/chain.hpp"
#include "mirror/graphlets.hpp"
#include "mirror/report.hpp"

namespace py = pybind11;

namespace {

struct PyModel {
  mirror::Model model;
  mirror::FitDiagnostics diagnostics;
};

py::dict record_to_dict(const mirror::MetricRecord& rec) {
  py::dict d;
  d["level"] = rec.level;
  d["n"] = rec.n;
  d["m"] = rec.m;
  d["gcd_to_original"] = rec.gcd_to_original;
  d["global_clustering"] = rec.clustering_profile.global_mean;
  d["transitivity"] = rec.clustering_profile.transitivity;
  if (rec.assortativity_report.status == mirror::AssortativityStatus::zero_variance)
    d["assortativity"] = py::none();
  else
    d["assortativity"] = rec.assortativity_report.global_r;
  d["centrality_converged"] = rec.centrality.converged;
  d["hop_counts"] = rec.hop_plot.counts;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "infinity mirror test: fit/generate recurrence analysis for graph generators";

  py::register_exception<mirror::FitFailure>(m, "FitFailure");

  py::class_<mirror::Graph>(m, "Graph")
      .def(py::init([](int n, const std::vector<std::pair<int, int>>& edges) {
             return mirror::Graph(n, edges);
           }),
           py::arg("num_nodes"), py::arg("edges"))
      .def_property_readonly("num_nodes", &mirror::Graph::num_nodes)
      .def_property_readonly("num_edges", &mirror::Graph::num_edges)
      .def("degree", &mirror::Graph::degree, py::arg("node"))
      .def("neighbors",
           [](const mirror::Graph& g, int v) {
             auto span = g.neighbors(v);
             return std::vector<int>(span.begin(), span.end());
           },
           py::arg("node"))
      .def("has_edge", &mirror::Graph::has_edge, py::arg("u"), py::arg("v"))
      .def_property_readonly("edges",
                             [](const mirror::Graph& g) { return g.edges(); })
      .def("__repr__", [](const mirror::Graph& g) {
        std::ostringstream os;
        os << "Graph(n=" << g.num_nodes() << ", m=" << g.num_edges() << ")";
        return os.str();
      });

  m.def(
      "load_graph",
      [](const std::string& path, bool keep_largest_component) {
        return mirror::load_edge_list_file(path, {keep_largest_component}).graph;
      },
      py::arg("path"), py::arg("keep_largest_component") = false,
      "Load a whitespace edge list ('#'/'%' comments allowed).");

  m.def(
      "parse_edge_list",
      [](const std::string& text, bool keep_largest_component) {
        std::istringstream in(text);
        return mirror::load_edge_list(in, {keep_largest_component}).graph;
      },
      py::arg("text"), py::arg("keep_largest_component") = false);

  m.def("write_edge_list",
        [](const mirror::Graph& g) { return mirror::to_edge_list(g); },
        py::arg("graph"));

  m.def(
      "degree_distribution",
      [](const mirror::Graph& g) {
        const auto dd = mirror::degree_distribution(g);
        py::dict hist, ccdf;  // degree-keyed, ascending insertion order
        for (const auto& [deg, cnt] : dd.histogram) hist[py::int_(deg)] = cnt;
        for (const auto& [deg, frac] : dd.ccdf) ccdf[py::int_(deg)] = frac;
        py::dict out;
        out["histogram"] = hist;
        out["ccdf"] = ccdf;
        return out;
      },
      py::arg("graph"));

  m.def(
      "eigenvector_centrality",
      [](const mirror::Graph& g, double tol, int max_iters) {
        const auto c = mirror::eigenvector_centrality(g, tol, max_iters);
        py::dict out;
        out["values"] = c.values;
        out["converged"] = c.converged;
        out["iterations"] = c.iterations;
        out["restricted_to_giant"] = c.restricted_to_giant;
        return out;
      },
      py::arg("graph"), py::arg("tol") = 1e-10, py::arg("max_iters") = 1000);

  m.def(
      "hop_plot",
      [](const mirror::Graph& g, int num_sources, std::uint64_t seed) {
        mirror::Rng rng(seed);
        const auto hp = mirror::hop_plot(g, num_sources, rng);
        py::dict out;
        out["counts"] = hp.counts;
        out["sources"] = hp.sources;
        return out;
      },
      py::arg("graph"), py::arg("num_sources") = 50, py::arg("seed") = 0);

  m.def(
      "clustering",
      [](const mirror::Graph& g) {
        const auto cp = mirror::clustering_profile(g);
        py::dict out;
        out["local"] = cp.local;
        out["global_mean"] = cp.global_mean;
        out["transitivity"] = cp.transitivity;
        py::dict by_degree;  // degree-keyed, ascending
        for (const auto& [deg, cc] : cp.by_degree) by_degree[py::int_(deg)] = cc;
        out["by_degree"] = by_degree;
        return out;
      },
      py::arg("graph"));

  m.def(
      "assortativity",
      [](const mirror::Graph& g) {
        const auto ar = mirror::assortativity(g);
        py::dict out;
        if (ar.status == mirror::AssortativityStatus::zero_variance) {
          out["status"] = "zero_variance";
          out["r"] = py::none();
          out["local"] = py::none();
        } else {
          out["status"] = "ok";
          out["r"] = ar.global_r;
          out["local"] = ar.local;
        }
        return out;
      },
      py::arg("graph"));

  m.def(
      "orbit_counts",
      [](const mirror::Graph& g) {
        const auto oc = mirror::count_orbits(g);
        std::vector<std::vector<std::int64_t>> rows;
        rows.reserve(oc.counts.size());
        for (const auto& row : oc.counts)
          rows.emplace_back(row.begin(), row.end());
        return rows;
      },
      py::arg("graph"), "Per-node counts for graphlet orbits 0..14.");

  m.def("gcd", &mirror::graphlet_correlation_distance, py::arg("g1"), py::arg("g2"),
        "Graphlet correlation distance between two graphs.");

  py::class_<PyModel>(m, "Model")
      .def_property_readonly(
          "kind", [](const PyModel& pm) { return mirror::to_string(mirror::model_kind(pm.model)); })
      .def_property_readonly("converged",
                             [](const PyModel& pm) { return pm.diagnostics.converged; })
      .def_property_readonly("notes",
                             [](const PyModel& pm) { return pm.diagnostics.notes; })
      .def("__repr__", [](const PyModel& pm) {
        return "Model(kind=" + mirror::to_string(mirror::model_kind(pm.model)) + ")";
      });

  m.def(
      "fit",
      [](const mirror::Graph& g, const std::string& kind, std::uint64_t seed) {
        const auto parsed = mirror::parse_model_kind(kind);
        if (!parsed) throw std::invalid_argument("unknown model kind: " + kind);
        mirror::FitOptions opts;
        opts.tcl.seed = mirror::derive_seed(seed, {mirror::hash64("tcl-fit")});
        opts.kron.seed = mirror::derive_seed(seed, {mirror::hash64("kron-fit")});
        auto fitted = mirror::fit_model(g, *parsed, opts);
        return PyModel{std::move(fitted.model), std::move(fitted.diagnostics)};
      },
      py::arg("graph"), py::arg("kind"), py::arg("seed") = 0,
      "Fit a model of the given kind: cl, tcl, bcl, kron, bter, identity.");

  m.def(
      "generate",
      [](const PyModel& pm, std::uint64_t seed, int retry_cap) {
        mirror::Rng rng(seed);
        return mirror::generate(pm.model, rng, {retry_cap});
      },
      py::arg("model"), py::arg("seed") = 0, py::arg("retry_cap") = 100);

  m.def(
      "run_chain",
      [](const mirror::Graph& g, const std::string& kind, int depth,
         std::uint64_t seed, bool compute_gcd) {
        const auto parsed = mirror::parse_model_kind(kind);
        if (!parsed) throw std::invalid_argument("unknown model kind: " + kind);
        mirror::ChainConfig cfg;
        cfg.model_kind = *parsed;
        cfg.depth = depth;
        cfg.seed = seed;
        cfg.compute_gcd = compute_gcd;
        const auto res = mirror::run_chain(g, cfg);
        py::dict out;
        out["status"] = mirror::to_string(res.status);
        out["terminal_level"] = res.terminal_level;
        out["failed_level"] = res.failed_level;
        py::list records;
        for (const auto& rec : res.records) records.append(record_to_dict(rec));
        out["records"] = records;
        return out;
      },
      py::arg("graph"), py::arg("kind"), py::arg("depth") = 10, py::arg("seed") = 0,
      py::arg("compute_gcd") = true,
      "Run one fit/generate recurrence chain and return per-level metrics.");
}
