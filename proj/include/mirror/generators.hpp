#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mirror/graph.hpp"
#include "mirror/rng.hpp"

namespace mirror {

enum class ModelKind { chung_lu, tcl, bcl, kronecker, bter, identity };

std::string to_string(ModelKind kind);
std::optional<ModelKind> parse_model_kind(const std::string& name);

struct CLModel {
  DegreeSequence degrees;
};

struct TCLModel {
  DegreeSequence degrees;
  double rho = 0.0;  // triangle-closure probability in [0,1]
};

struct BCLModel {
  DegreeSequence degrees;
  std::vector<int> bins;  // power-of-two lower bounds, bins[j] <= d < bins[j+1]
  // Raw observed/expected edge counts per bin pair; bin_affinity is their
  // ratio. Generation smooths (observed+1)/(expected+1) so a zero affinity
  // cannot lock a bin pair out across recurrences.
  std::vector<std::vector<double>> bin_affinity;
  std::vector<std::vector<double>> observed;
  std::vector<std::vector<double>> expected;

  int bin_of(int degree) const;
};

struct KronModel {
  std::array<double, 4> initiator{};  // row-major 2x2, entries in [0,1]
  int x = 1;                          // output has 2^x nodes
};

struct BTERModel {
  std::vector<std::pair<int, std::int64_t>> degree_counts;
  std::vector<std::pair<int, double>> target_ccd;  // mean local cc per degree
  std::vector<int> blocks;            // per node: block id, -1 outside phase 1
  std::vector<double> block_p;        // per block: internal ER probability
  std::vector<std::vector<int>> block_members;
  std::vector<double> excess_degrees;  // per node: phase-2 degree mass
  int num_nodes = 0;
};

struct IdentityModel {
  Graph graph;  // lossless stand-in: generation returns this graph verbatim
};

using Model = std::variant<CLModel, TCLModel, BCLModel, KronModel, BTERModel, IdentityModel>;

ModelKind model_kind(const Model& model);

struct FitDiagnostics {
  ModelKind model_kind = ModelKind::chung_lu;
  bool converged = true;
  std::vector<double> log_likelihood_trace;  // non-empty iff Kronecker
  double wall_time = 0.0;                    // seconds; not serialized
  std::string notes;
};

class FitFailure : public std::runtime_error {
 public:
  FitFailure(const std::string& msg, FitDiagnostics diag, Model partial);

  FitDiagnostics diagnostics;
  Model partial_model;  // last state before the failure, for inspection
};

struct TCLFitConfig {
  int em_iters = 12;  // bisection steps on rho
  int pilots = 8;     // generations averaged per probe
  std::uint64_t seed = 0x7c19a3u;
};

struct BCLFitConfig {
  std::string bin_scheme = "pow2";
};

struct KronFitConfig {
  std::array<double, 4> init_matrix{0.9, 0.6, 0.6, 0.2};
  int grad_iters = 100;
  int perm_samples = 10000;      // Metropolis swap proposals per iteration
  double learning_rate = 1e-7;   // scaled by n inside the fit
  double epsilon = 1e-4;         // clamp to [eps, 1-eps]
  std::uint64_t seed = 0x5eedbeefu;
};

struct GeneratorConfig {
  int retry_cap = 100;  // redraws per edge before the edge is dropped
};

CLModel fit_chung_lu(const Graph& g);
TCLModel fit_tcl(const Graph& g, const TCLFitConfig& config = {},
                 FitDiagnostics* diag = nullptr);
BCLModel fit_bcl(const Graph& g, const BCLFitConfig& config = {});
KronModel fit_kronecker(const Graph& g, const KronFitConfig& config = {},
                        FitDiagnostics* diag = nullptr);
BTERModel fit_bter(const Graph& g);
IdentityModel fit_identity(const Graph& g);

Graph generate_chung_lu(const CLModel& model, Rng& rng, const GeneratorConfig& config = {});
Graph generate_tcl(const TCLModel& model, Rng& rng, const GeneratorConfig& config = {});
Graph generate_bcl(const BCLModel& model, Rng& rng, const GeneratorConfig& config = {});
Graph generate_kronecker(const KronModel& model, Rng& rng, const GeneratorConfig& config = {});
Graph generate_bter(const BTERModel& model, Rng& rng, const GeneratorConfig& config = {});

struct FitOptions {
  TCLFitConfig tcl;
  BCLFitConfig bcl;
  KronFitConfig kron;
};

struct FittedModel {
  Model model;
  FitDiagnostics diagnostics;
};

FittedModel fit_model(const Graph& g, ModelKind kind, const FitOptions& options = {});
Graph generate(const Model& model, Rng& rng, const GeneratorConfig& config = {});

}  // namespace mirror
