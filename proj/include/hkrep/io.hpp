#pragma once

// Config files for Cartan data (JSON or a small TOML subset), module files
// (structure-matrix or raw matrix form), and shared report helpers.
//
// Vertices are 1-indexed in every file.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "hkrep/cartan.hpp"
#include "hkrep/hmodule.hpp"

namespace hkrep {

inline constexpr const char* kLibraryVersion = "0.1.0";
inline constexpr int kFormatVersion = 1;

struct Config {
  DatumPtr datum;
  int k = 1;
  std::uint32_t p = 5;
  /// Parsed input, echoed into reports.
  nlohmann::json echo;
};

/// Keys n, C, D, omega (1-indexed pairs), optional k (1) and p (5).
/// Errors: InvalidInput, plus the cartan validation errors.
Config parse_config(const nlohmann::json& j);
/// Lines `key = value` with integer or nested integer-array values; `#` comments;
/// arrays may span lines.
nlohmann::json parse_toml_subset(const std::string& text);
/// JSON unless the file ends in .toml or does not start with '{'.
Config load_config(const std::string& path);

/// Structure form when the module is locally free, raw `eps`/`arrow` form otherwise.
/// Integer entries come from the lift when there is one.
nlohmann::json module_to_json(const HModule& m);
/// Errors: InvalidInput, ShapeMismatch, EntryDegreeOverflow, relation violations.
HModule module_from_json(const DatumPtr& datum, const nlohmann::json& j);
HModule load_module(const DatumPtr& datum, const std::string& path);

/// "1,0,2" -> (1,0,2); empty string -> zero vector of length n.
RankVector parse_rank(const std::string& text, int n);
/// "1,0;0,1" -> ((1,0),(0,1)). '/' works as a separator too.
std::vector<RankVector> parse_brseq(const std::string& text, int n);

nlohmann::json config_echo(const Config& config);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace hkrep
