#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mqrm_cli/config.hpp"

namespace mqrm::cli {

enum class Command { Decay, Angles, Energy };

std::string to_string(Command c);
Command parse_command(std::string_view name);

struct CommandOptions {
  unsigned jobs = 1;
  std::string out;              // overrides output.directory when set
  std::ostream* log = nullptr;  // progress and warnings
};

struct RunSummary {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
};

/// One resolved configuration per point of the Cartesian product of the
/// sweep axes, each with its axes cleared. Points are ordered with the last
/// axis varying fastest.
std::vector<RunConfig> expand_sweep(const RunConfig& cfg);

/// Short tag naming the swept values of one point, e.g. "M15_g0.1_beta0.5".
std::string point_tag(const RunConfig& point);

/// Rough peak memory of one TDVP job: 16 bytes (2M+1) D^2 (N_max+1) times
/// the number of simultaneously held site-sized blocks.
double estimate_job_memory_mb(const RunConfig& cfg);

/// Throws ConfigError when jobs * estimate exceeds numerics.memory_limit_mb.
void check_memory(const RunConfig& cfg, unsigned jobs);

/// Runs every sweep point of `points` (see expand_sweep) and writes one CSV
/// plus JSON sidecar per point; several points also get an index CSV.
RunSummary run_command(Command cmd, const std::vector<RunConfig>& points, const CommandOptions& opts);

RunSummary run_decay(const RunConfig& cfg, const CommandOptions& opts);
RunSummary run_angles(const RunConfig& cfg, const CommandOptions& opts);
RunSummary run_energy(const RunConfig& cfg, const CommandOptions& opts);

/// Figure recipes: fig1a, fig1b, fig2, fig3a, fig3b, fig3c, fig4a, fig4b.
struct Preset {
  std::string name;
  Command command;
  std::string description;
  std::vector<std::string> common;               // block.key=value
  std::vector<std::vector<std::string>> points;  // extra assignments per point; empty = one point
};

const std::vector<Preset>& presets();
const Preset& find_preset(std::string_view name);

/// Applies the preset on top of `base` and returns its points before sweep
/// expansion.
std::vector<RunConfig> preset_points(const Preset& preset, const RunConfig& base);

}  // namespace mqrm::cli
