#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mqrm_cli/commands.hpp"
#include "mqrm_cli/config.hpp"
#include "mqrm_cli/validate.hpp"

namespace {

struct Common {
  std::string config;
  std::string out;
  std::string engine;
  std::string preset;
  unsigned jobs = 1;
  std::vector<std::string> overrides;
  bool echo = false;
};

void add_common(CLI::App* sub, Common& c, bool with_preset) {
  sub->add_option("--config", c.config, "Configuration file (text format or a JSON sidecar)");
  sub->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--out", c.out, "Output directory (default: output.directory, then $MQRM_OUT_DIR, then .)");
  sub->add_option("--engine", c.engine, "analytic, se or tdvp")->check(CLI::IsMember({"analytic", "se", "tdvp"}));
  if (with_preset) sub->add_option("--preset", c.preset, "Figure recipe: fig1a fig1b fig2 fig3a fig3b fig3c fig4a fig4b");
  sub->add_flag("--echo-config", c.echo, "Print the resolved configuration of every point");
  sub->add_option("overrides", c.overrides, "block.key=value assignments");
}

std::vector<mqrm::cli::RunConfig> resolve(const Common& c, std::optional<mqrm::cli::Command>& cmd) {
  using namespace mqrm::cli;
  RunConfig base = c.config.empty() ? parse_config("") : load_config(c.config);
  std::vector<RunConfig> points;
  if (!c.preset.empty()) {
    const auto& preset = find_preset(c.preset);
    if (cmd && *cmd != preset.command) {
      throw ConfigError("preset '" + preset.name + "' is a '" + to_string(preset.command) + "' recipe");
    }
    cmd = preset.command;
    points = preset_points(preset, base);
  } else {
    points.push_back(base);
  }
  for (auto& p : points) {
    for (const auto& o : c.overrides) apply_override(p, o);
    if (!c.engine.empty()) assign(p, "task.engine", c.engine);
  }
  return points;
}

int run(mqrm::cli::Command cmd, const Common& c, std::optional<mqrm::cli::Command> fixed) {
  using namespace mqrm::cli;
  auto chosen = fixed;
  auto points = resolve(c, chosen);
  if (chosen) cmd = *chosen;
  if (c.echo) {
    for (const auto& p : points) {
      for (const auto& q : expand_sweep(p)) std::cout << "# config " << q.hash() << "\n" << q.to_text();
    }
  }
  CommandOptions opts;
  opts.jobs = c.jobs;
  opts.out = c.out;
  opts.log = &std::cerr;
  const auto summary = run_command(cmd, points, opts);
  for (const auto& f : summary.files) std::cout << f.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace mqrm::cli;
  CLI::App app{"Repeated-measurement decay of a qubit in the multimode quantum Rabi model"};
  app.require_subcommand(1);

  Common decay, angles, energy, sweep, validate;
  std::string sweep_kind = "decay";
  auto* s_decay = app.add_subcommand("decay", "Decay curve P_sur(tau), gamma(tau)");
  add_common(s_decay, decay, true);
  auto* s_angles = app.add_subcommand("angles", "gamma(phi) scan and critical angles");
  add_common(s_angles, angles, true);
  auto* s_energy = app.add_subcommand("energy", "Energy flow between the qubit and the modes");
  add_common(s_energy, energy, true);
  auto* s_sweep = app.add_subcommand("sweep", "Run task.sweep_* axes (or a preset) for one command");
  add_common(s_sweep, sweep, true);
  s_sweep->add_option("--kind", sweep_kind, "decay, angles or energy")
      ->check(CLI::IsMember({"decay", "angles", "energy"}));
  auto* s_validate = app.add_subcommand("validate", "Property battery with a pass/fail table");
  s_validate->add_option("--config", validate.config, "Configuration file");
  s_validate->add_option("--jobs", validate.jobs, "Worker threads")->check(CLI::PositiveNumber);
  s_validate->add_option("overrides", validate.overrides, "block.key=value assignments");

  CLI11_PARSE(app, argc, argv);

  try {
    if (s_decay->parsed()) return run(Command::Decay, decay, Command::Decay);
    if (s_angles->parsed()) return run(Command::Angles, angles, Command::Angles);
    if (s_energy->parsed()) return run(Command::Energy, energy, Command::Energy);
    if (s_sweep->parsed()) {
      const bool kind_given = s_sweep->count("--kind") > 0;
      return run(parse_command(sweep_kind), sweep,
                 kind_given ? std::optional<Command>(parse_command(sweep_kind)) : std::nullopt);
    }
    if (s_validate->parsed()) {
      RunConfig cfg = validate.config.empty() ? parse_config("") : load_config(validate.config);
      for (const auto& o : validate.overrides) apply_override(cfg, o);
      cfg.validate();
      const auto report = run_validate(cfg, validate.jobs);
      std::cout << format_report(report);
      return report.ok() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "mqrm: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
