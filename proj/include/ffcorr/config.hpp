#pragma once

// Experiment configuration (a flat key=value text format) and the batch
// command dispatcher behind the ffcorr tool.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ffcorr/irreducible.hpp"

namespace ffcorr {

struct NRange {
  unsigned lo = 1;
  unsigned hi = 1;
  unsigned step = 1;
  friend bool operator==(const NRange&, const NRange&) = default;
};

/// Parses "lo:hi" or "lo:hi:step".
NRange parse_n_range(std::string_view text);

struct ExperimentConfig {
  std::uint32_t p = 2;
  std::optional<unsigned> n;
  std::optional<NRange> n_range;
  std::string domain = "monic";
  std::vector<std::string> functions;  // spec strings, one per slot
  std::vector<std::string> shifts;     // polynomial strings, one per slot
  std::optional<unsigned> gamma;
  std::optional<unsigned> depth;
  std::optional<unsigned> cutoff;
  std::vector<double> t_grid;
  std::string output;                  // artifact stem; empty = ffcorr_<command>
  std::string cache_dir;               // empty = $FFCORR_CACHE_DIR or .ffcorr-cache
  unsigned partitions = 1;
  std::optional<unsigned> max_deg;     // sieve
  std::string poly;                    // factor
  std::optional<unsigned> y;           // chowla
  double bound_constant = 1.0;         // chowla overlay constant C
  double bv_t = 1.0;                   // diagnostics: BV range exponent
  bool timing = false;                 // write measured seconds into CSVs

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Canonical key=value text; parse_config(format_config(c)) == c.
std::string format_config(const ExperimentConfig& config);
/// Reads key=value lines; '#' starts a comment. Unknown keys are rejected.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Sets one key from its text form (shared by files and flags).
void set_config_value(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Parses "a,b,c" or "lo:hi:step" into grid points.
std::vector<double> parse_t_grid(std::string_view text);

/// Cache directory: config value, then $FFCORR_CACHE_DIR, then .ffcorr-cache.
std::filesystem::path cache_directory(const ExperimentConfig& config);
/// Loads the smallest cached table for p covering `min_deg`, or sieves one
/// and stores it in the cache directory.
IrreducibleTable cached_table(const ExperimentConfig& config, unsigned min_deg, std::ostream* log = nullptr);
/// Writes `table` into the cache directory (atomically) and returns its path.
std::filesystem::path store_table(const ExperimentConfig& config, const IrreducibleTable& table);

inline constexpr const char* kCommands[] = {"sieve", "factor", "correlate", "mainterm", "chowla",
                                            "dist",  "charfn", "tk",        "diagnostics"};

/// Runs one command, writes its artifacts (<stem>.csv and <stem>.json) and
/// a summary to `out`. Returns 0 on success, 1 on validation errors and 2
/// when a budget is exceeded.
int dispatch(std::string_view command, const ExperimentConfig& config, std::ostream& out, std::ostream& err);

}  // namespace ffcorr
