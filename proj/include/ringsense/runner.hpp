#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "ringsense/io.hpp"

namespace ringsense {

inline constexpr const char* tool_version = "0.1.0";

enum class Command {
  Spectrum,
  BaeSpectrum,
  Sensitivity,
  Budget,
  Bistability,
  SteadyStateInfo,
  AngleScan,
};

const char* command_name(Command cmd);

struct RunOptions {
  std::filesystem::path out_dir = "runs";
  bool force = false;
  int jobs = 0;  // overrides config when > 0
};

struct RunResult {
  std::filesystem::path dir;
  nlohmann::json summary;
  int points_total = 0;
  int computed = 0;
  int reused = 0;
  int failed = 0;
};

// Executes one subcommand over the config's sweep grid, writing one CSV per
// sweep point plus summary.json and manifest.json. Idempotent per config
// hash: existing point files are reused unless force is set.
RunResult run(Command cmd, const RunConfig& cfg, const RunOptions& opt);

// Invariant battery behind the `validate` subcommand; prints one line per
// check, returns the number of failures.
int run_validation(const RunConfig& cfg, std::ostream& log);

}  // namespace ringsense
