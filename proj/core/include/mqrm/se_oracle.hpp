#pragma once

// Single-excitation sector of the unsqueezed thermofield Hamiltonian:
//   |psi> = chi |up,0> + sum_m p_m |down,1_am> + sum_m q_m |down,1_bm>.
// A fixed-step RK4 integrator in the rotating frame, checked a posteriori
// against a run at half the step. Amplitudes are returned in the lab frame.

#include <span>
#include <vector>

#include "mqrm/model.hpp"

namespace mqrm::se {

struct SEAmplitudes {
  double time = 0.0;
  cplx chi = 1.0;
  std::vector<cplx> p;
  std::vector<cplx> q;

  double norm() const;
};

struct SeTrajectory {
  std::vector<SEAmplitudes> samples;
  double step = 0.0;               // largest step actually taken
  long long steps = 0;
  double halving_deviation = 0.0;  // max |P_sur(dt) - P_sur(dt/2)| over samples
  double max_norm_drift = 0.0;     // max |1 - norm|
  double max_energy_drift = 0.0;   // max |<H_SE>(t) - <H_SE>(0)|
};

/// min(1e-3 / g, 0.01 / Omega) with Omega = M omega0 + |Delta|, the fastest
/// rotating-frame phase.
double default_step(const ModelParams& p);

/// Samples after every integration step up to t_final.
/// Throws for r != 0 or when t_final / dt < 10.
SeTrajectory se_evolve(const ModelParams& p, const SqueezeThermal& st, double t_final, double dt);

/// Samples at the given increasing times (> 0). The step is shrunk so each
/// sample time is hit exactly.
SeTrajectory se_sample(const ModelParams& p, const SqueezeThermal& st, std::span<const double> times,
                       double dt, bool halving_check = true);

/// P_sur = |chi|^2.
double survival_from_se(const SEAmplitudes& amps);

/// <H_SE> including the exchange terms; conserved by the exact dynamics.
double se_energy(const ModelParams& p, const SqueezeThermal& st, const SEAmplitudes& amps);

/// Change of the physical-mode occupation relative to the initial thermal
/// value: cosh^2 th |p_m|^2 + sinh^2 th |q_m|^2.
std::vector<double> se_mode_excitation(const ModelParams& p, const SqueezeThermal& st,
                                       const SEAmplitudes& amps);

}  // namespace mqrm::se
