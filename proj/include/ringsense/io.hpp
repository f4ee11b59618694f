#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ringsense/grid.hpp"
#include "ringsense/noise.hpp"
#include "ringsense/params.hpp"

namespace ringsense {

struct SweepAxis {
  std::string path;  // dotted parameter path, e.g. system.input_power_w
  double from = 0, to = 0;
  int points = 1;
  bool log_scale = false;
};

// One structured config drives every subcommand; unknown keys are errors
// with their full path.
struct RunConfig {
  std::string scheme = "mono-squeezed";  // or "bae"
  SystemParams system;
  bool collisions = true;
  std::string detuning_mode = "zero-effective";  // or "bare"
  SqueezeParams squeeze;
  double bae_power_plus_w = 12.4e-15;
  double bae_power_minus_w = 12.4e-15;
  bool bae_resonant = true;
  double bae_delta_hz = 0.0;
  GridSpec grid;
  std::string phi_policy = "auto";  // auto | fixed | explicit
  double phi_rad = 1.57079632679489661923;
  std::string emit = "both";  // csv | json | both
  int jobs = 0;               // 0 = all cores
  std::vector<SweepAxis> sweeps;
};

// The Fig.-2 caption parameter set; collisions on, squeeze off.
RunConfig paper_defaults();

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::filesystem::path& file);

// Numeric parameter paths addressable by sweeps (sorted).
std::vector<std::string> sweepable_paths();
void apply_parameter(RunConfig& cfg, const std::string& path, double value);

// Canonical key-sorted dump; identical configs hash identically.
std::string canonical_config(const RunConfig& cfg);
std::uint64_t config_hash(const RunConfig& cfg);

std::uint64_t fnv1a64(const std::string& data);

// Full-precision scientific formatting used for every CSV number.
std::string format_full(double v);

struct CsvTable {
  std::vector<std::string> comments;  // "# col: units" lines
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_csv(const std::filesystem::path& file, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& file);

}  // namespace ringsense
