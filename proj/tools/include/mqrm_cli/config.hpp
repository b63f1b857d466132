#pragma once

// Run configuration. Text format:
//
//   # comment
//   model {
//     g = 0.1
//     num_modes = 15
//   }
//   state.beta = 0.5
//
// Blocks are model, state, numerics, task and output. Every key may also be
// written as block.key = value at top level or on the command line. Lists
// are comma separated; numeric lists also accept start:stop:step (inclusive).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mqrm/model.hpp"
#include "mqrm/tn/config.hpp"
#include "mqrm/zeno.hpp"

namespace mqrm::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelBlock {
  double delta = 1.0;
  double omega0 = 1.0;
  double g = 0.1;
  int num_modes = 15;
};

struct StateBlock {
  double r = 0.0;
  double phi = 0.0;
  std::string beta = "inf";
};

struct TaskBlock {
  zeno::Engine engine = zeno::Engine::Analytic;
  std::vector<double> tau;          // decay grid
  double angle_tau = 0.1;           // fixed tau of an angle scan
  int phi_points = 128;             // uniform grid over [0, 2 pi)
  double t_final = 1.0;             // energy-flow window
  int t_samples = 200;
  double fit_window = 0.3;
  double backflow_threshold = 1e-6;
  bool squeezed_analytic = true;
  bool auto_n_max = false;
  double se_dt = 0.0;
  // Sweep axes; empty means the single value of the corresponding block.
  std::vector<double> sweep_g;
  std::vector<int> sweep_num_modes;
  std::vector<double> sweep_r;
  std::vector<double> sweep_phi;
  std::vector<std::string> sweep_beta;
  std::vector<double> sweep_angle_tau;
};

struct OutputBlock {
  std::string directory;  // empty: $MQRM_OUT_DIR, else "."
  bool csv = true;
  bool json = true;
  std::string label;
};

struct RunConfig {
  ModelBlock model;
  StateBlock state;
  tn::NumericsConfig numerics;
  double memory_limit_mb = 4096.0;
  TaskBlock task;
  OutputBlock output;

  ModelParams model_params() const;
  SqueezeThermal squeeze_thermal() const;
  zeno::DecayOptions decay_options(unsigned jobs) const;

  /// Resolved configuration in the text format, every key spelled out.
  std::string to_text() const;
  /// FNV-1a of to_text(), as 16 hex digits.
  std::string hash() const;

  /// Checks ranges and cross-field consistency.
  void validate() const;
};

/// Applies one `block.key = value` assignment. Throws ConfigError for an
/// unknown key or a malformed value.
void assign(RunConfig& cfg, std::string_view dotted_key, std::string_view value);

/// Parses the text format on top of `base`.
RunConfig parse_config(std::string_view text, RunConfig base = {});

/// Reads a config file. A JSON sidecar written by this tool is accepted and
/// its embedded resolved configuration is used.
RunConfig load_config(const std::string& path, RunConfig base = {});

/// Parses a `block.key=value` override.
void apply_override(RunConfig& cfg, std::string_view assignment);

/// Numeric list: "a,b,c" or "start:stop:step" (inclusive of stop within
/// half a step), or a mixture separated by commas.
std::vector<double> parse_real_list(std::string_view text);

std::string format_real(double v);

/// FNV-1a 64-bit.
std::uint64_t fnv1a(std::string_view data);

}  // namespace mqrm::cli
