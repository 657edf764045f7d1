#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"
#include "mirror/chain.hpp"

namespace mirror {

std::string sha256_hex(std::string_view data);

// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

// Path-safe directory component for a dataset or model name.
std::string sanitize_name(const std::string& name);

// Writes the full experiment report under `dir` and returns the manifest,
// which is also written to dir/manifest.json. Every emitted file is listed
// in the manifest with its sha256.
nlohmann::ordered_json emit_report(const ExperimentResult& result,
                                   const std::filesystem::path& dir);

// One-shot metric dump for a single graph (the `mirror metrics` mode):
// the chain CSV families plus orbit counts and the correlation matrix.
void emit_graph_metrics(const Graph& g, const std::filesystem::path& dir,
                        std::uint64_t seed, int hop_sources = 50);

}  // namespace mirror
