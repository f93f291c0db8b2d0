#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aniso/verify/report.hpp"
#include "aniso_cli/config.hpp"
#include "aniso_cli/experiments.hpp"

namespace aniso::cli {

enum ExitCode : int { ExitOk = 0, ExitConfig = 1, ExitNumeric = 2 };

struct RunOptions {
  std::filesystem::path config;
  std::filesystem::path out;            // empty: the config's "output"
  unsigned threads = 1;
  std::optional<std::uint64_t> seed;    // overrides the config seed
  bool deterministic = true;
};

struct RunOutcome {
  int exit_code = ExitOk;
  std::string status;  // "ok", "config_error", "io_error", "numeric_failure"
  std::string message;
  std::vector<InequalityReport> reports;
  std::vector<OutputFile> files;
};

/// Hash identifying the inputs: FNV-1a over the config text and the seed.
std::uint64_t input_hash(const std::string& config_text, std::uint64_t seed);

/// Writes manifest.json with a stable key order and no timestamps.
std::string manifest_json(const std::string& experiment, std::uint64_t input_hash, std::uint64_t seed,
                          const std::string& status, const std::vector<OutputFile>& files);

/// Reads, validates and runs one config. Diagnostics go to `diag`.
RunOutcome run(const RunOptions& opts, std::ostream& diag);

/// Same as run() for an in-memory config; `source` names it in diagnostics.
RunOutcome run_text(const std::string& text, const std::string& source, const RunOptions& opts, std::ostream& diag);

}  // namespace aniso::cli
