#pragma once

// Second-order symmetric TDVP. The initial product state is first padded to
// bond dimension min(d_max, full) with zero-weight directions. The first
// `warmup_steps` steps are two-site sweeps, whose SVD rotates the bond bases
// toward the populated directions at fixed dimension; the evolution then
// continues with single-site sweeps.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mqrm/model.hpp"
#include "mqrm/tn/config.hpp"
#include "mqrm/tn/environment.hpp"
#include "mqrm/tn/mpo.hpp"
#include "mqrm/tn/mps.hpp"

namespace mqrm::tn {

struct Snapshot {
  double time = 0.0;
  double sigma_z = 1.0;
  double p_sur = 1.0;
  double norm = 1.0;
  double energy = 0.0;
  std::vector<double> number_frame;     // <a_m^+ a_m>
  std::vector<double> number_physical;  // original-frame occupation
  double tail = 0.0;                    // top-two Fock level occupation, max over sites
  std::optional<TfdMps> state;
};

struct TdvpReport {
  double step = 0.0;  // largest step taken
  long long steps = 0;
  int warmup_steps_done = 0;
  double max_norm_drift = 0.0;             // max |1 - <psi|psi>|
  double max_relative_energy_drift = 0.0;  // max |E(t) - E(0)| / |E(0)| (absolute when E(0) = 0)
  double discarded_weight = 0.0;
  bool truncation_exceeded = false;
  double max_krylov_error = 0.0;
  long long krylov_matvecs = 0;
  long long krylov_splits = 0;
  bool krylov_converged = true;
  double max_tail = 0.0;
  bool tail_warning = false;
  std::vector<int> bond_dims;
  std::vector<std::string> warnings;

  bool converged() const { return !truncation_exceeded && krylov_converged && !tail_warning; }
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  TdvpReport report;
};

struct TdvpOptions {
  bool keep_states = false;
  bool measure_modes = true;
};

/// Evolves `state` and records a snapshot at t = 0 and at every sample time
/// (strictly increasing, > 0). The step is shrunk so sample times are hit
/// exactly.
Trajectory tdvp_evolve(TfdMps state, const TfdMpo& mpo, const NumericsConfig& cfg, std::span<const double> times,
                       const ModelParams& p, const SqueezeThermal& st, const TdvpOptions& opts = {});

/// Builds layout, MPO and initial state from the model and evolves.
Trajectory run_tdvp(const ModelParams& p, const SqueezeThermal& st, const NumericsConfig& cfg,
                    std::span<const double> times, const TdvpOptions& opts = {});

/// Smallest cutoff from {4, 8, 16, 32, ...} (capped at cfg.n_max) whose
/// pre-run at reduced bond dimension keeps the tail below `tail_target`.
int suggest_n_max(const ModelParams& p, const SqueezeThermal& st, const NumericsConfig& cfg, double horizon,
                  double tail_target = 1e-10);

}  // namespace mqrm::tn
