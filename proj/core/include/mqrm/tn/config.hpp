#pragma once

#include "mqrm/hamiltonian.hpp"
#include "mqrm/model.hpp"
#include "mqrm/tn/layout.hpp"

namespace mqrm::tn {

/// Truncation and integrator controls of the tensor-network engine.
struct NumericsConfig {
  int n_max = 80;            // Fock cutoff per boson site
  int d_max = 15;            // MPS bond-dimension cap
  double dt = 0.0;           // time step; 0 selects g dt = 1e-3
  int krylov_dim = 10;       // Lanczos subspace size per local exponential
  double krylov_tol = 1e-12;
  double svd_cutoff = 1e-10;
  /// Each step also satisfies (largest local frequency) * dt <= max_phase_step.
  double max_phase_step = 0.25;
  /// Two-site steps at the start.
  int warmup_steps = 1;
  /// Cumulative discarded weight above which a run is flagged non-converged.
  double truncation_budget = 1e-6;
  /// Occupation of the top two Fock levels above which a warning is raised.
  double tail_warning = 1e-8;
  bool drop_fictitious_at_T0 = true;
  bool check_hermiticity = true;
  QuadraticConvention convention{};

  /// The step before the phase cap: dt if set, else 1e-3 / g (1e-3 at g = 0).
  double base_step(const ModelParams& p) const;
  /// base_step capped by max_phase_step / omega_max, omega_max = A M omega0 + |Delta|.
  double resolved_step(const ModelParams& p, const SqueezeThermal& st) const;

  void validate() const;
};

/// Doubled chain, or the physical half when beta is infinite and the
/// drop optimization is enabled.
ChainLayout make_layout(const ModelParams& p, const SqueezeThermal& st, const NumericsConfig& cfg);

}  // namespace mqrm::tn
