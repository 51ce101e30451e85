#pragma once

// Loading of the JSON files the command-line tool works from: workspace
// config, problem descriptions, reduction descriptions and instance domains.

#include "json.hpp"
#include "tfnp/bits.hpp"
#include "tfnp/problem.hpp"
#include "tfnp/reduction.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace tfnp::cli {

struct WorkspaceConfig {
  std::size_t gate_cap = std::size_t{1} << 20;
  std::size_t solver_max_bits = core::kSweepBits;  // widest exhaustive witness sweep
  std::size_t max_domain = 1u << 16;                // instances per check-reduction run
  std::size_t max_tuples = 100000;                  // Herbrand tuples per expansion
  std::uint64_t seed = 0;
  std::string data_dir;  // empty: the data directory of the source tree
};

/// Reads a config file; missing keys keep their defaults. Throws InputError
/// on unknown keys or non-positive limits.
WorkspaceConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const WorkspaceConfig& c);

/// "15" (decimal), "0x0f" (4 bits per digit), "0b0101", "8:0f" (exact
/// length and hex) or "text:..." (the bytes of the text).
BitString parse_instance(const std::string& text);

/// Witness rendering: hex value, decimal when it fits, and the raw bits.
nlohmann::json describe_bits(const BitString& b);
std::string show_bits(const BitString& b);

nlohmann::json read_json(const std::filesystem::path& path);

/// {"problem": "FACTORING" | "SUCC" | "ADD" | "PIGEON" | "HCS" | "U", ...}
/// ADD takes "k", PIGEON takes "family", HCS takes "sentence" (a file path
/// relative to `base`, or "php" for the shipped pigeonhole axioms).
/// "padded": true applies the fixed-width witness normalisation.
core::TFNPProblem load_problem(const nlohmann::json& j, const std::filesystem::path& base,
                               const WorkspaceConfig& config);

struct LoadedReduction {
  core::ManyOneReduction reduction;
  core::TFNPProblem source, target;
  nlohmann::json domain_spec;      // the file's "domain", null when absent
  std::vector<BitString> domain;  // built-in test domain, used when the spec is null
};

/// {"reduction": "identity" | "broken" | "pigeon-hcs" | "embed" | "compose", ...}
LoadedReduction load_reduction(const nlohmann::json& j, const std::filesystem::path& base,
                               const WorkspaceConfig& config);

/// "a..b" (numbers), "strings:n" (all strings up to length n) or a JSON
/// list of instances. Past `limit` instances it throws ResourceLimit, or,
/// when `truncated` is given, stops there and sets the flag.
std::vector<BitString> parse_domain(const nlohmann::json& spec, std::size_t limit, bool* truncated = nullptr);

}  // namespace tfnp::cli
