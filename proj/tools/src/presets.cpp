#include "mqrm_cli/commands.hpp"

namespace mqrm::cli {

namespace {

// Numerics shared by the TDVP angle recipes: a pi/16 grid and reduced
// truncation so a recipe finishes in tens of minutes on one core.
const std::vector<std::string> kCoarseTdvp = {
    "task.engine=tdvp", "task.phi_points=32", "numerics.n_max=16", "numerics.d_max=8",
};

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = {
      {"fig1a",
       Command::Decay,
       "gamma(tau) at T = 0 for a single mode (g = 0.01, 0.2) and 15 modes (g = 0.01, 0.1)",
       {"state.r=0", "state.beta=inf", "task.tau=0.01:1:0.01", "output.label=fig1a"},
       {{"model.num_modes=1", "model.g=0.01"},
        {"model.num_modes=1", "model.g=0.2"},
        {"model.num_modes=15", "model.g=0.01"},
        {"model.num_modes=15", "model.g=0.1"}}},
      {"fig1b",
       Command::Decay,
       "gamma(tau) for 15 modes at g = 0.1 and several temperatures",
       {"model.num_modes=15", "model.g=0.1", "state.r=0", "task.tau=0.01:1:0.01", "task.sweep_beta=inf,2,1,0.5",
        "output.label=fig1b"},
       {}},
      {"fig2",
       Command::Energy,
       "qubit and per-mode energies for 15 modes, g = 0.1, beta = 0.5",
       {"model.num_modes=15", "model.g=0.1", "state.r=0", "state.beta=0.5", "task.engine=se", "task.t_final=1",
        "task.t_samples=400", "output.label=fig2"},
       {}},
      {"fig3a",
       Command::Angles,
       "gamma(phi) at T = 0, g = 0.01, tau = 0.1, r = 0.3 for growing mode number",
       concat({"model.g=0.01", "state.r=0.3", "state.beta=inf", "task.angle_tau=0.1", "task.sweep_num_modes=1,5,10,15",
               "output.label=fig3a"},
              kCoarseTdvp),
       {}},
      {"fig3b",
       Command::Angles,
       "gamma(phi) at T = 0, tau = 0.1 for several r and g = 0.01, 0.1 (gamma / g^2 collapse table)",
       concat({"model.num_modes=15", "state.beta=inf", "task.angle_tau=0.1", "task.sweep_r=0.1,0.3,0.5",
               "task.sweep_g=0.01,0.1", "output.label=fig3b"},
              kCoarseTdvp),
       {}},
      {"fig3c",
       Command::Angles,
       "gamma(phi) at T = 0, g = 0.01, r = 0.3 for several tau",
       concat({"model.num_modes=15", "model.g=0.01", "state.r=0.3", "state.beta=inf",
               "task.sweep_angle_tau=0.05,0.1,0.2,0.3,0.5", "output.label=fig3c"},
              kCoarseTdvp),
       {}},
      {"fig4a",
       Command::Angles,
       "gamma(phi) at tau = 0.1, g = 0.01, r = 0.3 for several temperatures",
       concat({"model.num_modes=15", "model.g=0.01", "state.r=0.3", "task.angle_tau=0.1",
               "task.sweep_beta=inf,2,1,0.5", "output.label=fig4a"},
              kCoarseTdvp),
       {}},
      {"fig4b",
       Command::Decay,
       "gamma(tau) at phi = pi/2, g = 0.01, r = 0.3 for several temperatures",
       {"model.num_modes=15", "model.g=0.01", "state.r=0.3", "state.phi=1.5707963267948966",
        "task.tau=0.01:1:0.01", "task.sweep_beta=inf,2,1,0.5", "output.label=fig4b"},
       {}},
  };
  return all;
}

const Preset& find_preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  std::string known;
  for (const auto& p : presets()) known += (known.empty() ? "" : ", ") + p.name;
  throw ConfigError("unknown preset '" + std::string(name) + "' (known: " + known + ")");
}

std::vector<RunConfig> preset_points(const Preset& preset, const RunConfig& base) {
  RunConfig common = base;
  for (const auto& a : preset.common) apply_override(common, a);
  if (preset.points.empty()) return {common};
  std::vector<RunConfig> out;
  for (const auto& extra : preset.points) {
    RunConfig c = common;
    for (const auto& a : extra) apply_override(c, a);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace mqrm::cli
