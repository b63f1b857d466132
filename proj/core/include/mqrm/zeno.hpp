#pragma once

// Repeated projective measurement: survival probability, effective decay
// rate gamma(tau) = -ln P_sur(tau) / tau, QZE / QAZE classification, energy
// flow between the qubit and the modes, and squeezing-angle scans.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mqrm/model.hpp"
#include "mqrm/se_oracle.hpp"
#include "mqrm/tn/config.hpp"
#include "mqrm/tn/tdvp.hpp"

namespace mqrm::zeno {

enum class Engine { Analytic, Se, Tdvp };

std::string to_string(Engine e);
/// "analytic", "se" or "tdvp".
Engine parse_engine(std::string_view name);

/// -ln(p_sur) / tau. Throws for p_sur <= 0, p_sur > 1 + 1e-10 or tau <= 0.
double effective_decay_rate(double p_sur, double tau);

/// p_sur_single^n. Throws for n < 1.
double survival_n_measurements(double p_sur_single, int n);

struct DecayOptions {
  tn::NumericsConfig numerics{};
  /// Integration step of the SE oracle; 0 selects se::default_step.
  double se_dt = 0.0;
  bool se_halving_check = true;
  /// Analytic engine with r != 0: use the squeezing-renormalized rate.
  bool squeezed_analytic = false;
  /// TDVP: choose n_max with tn::suggest_n_max before the run.
  bool auto_n_max = false;
  unsigned jobs = 1;
};

struct SeDiagnostics {
  double step = 0.0;
  double halving_deviation = 0.0;
  double max_norm_drift = 0.0;
  double max_energy_drift = 0.0;
};

struct DecayCurve {
  std::vector<double> tau;
  std::vector<double> p_sur;
  std::vector<double> gamma;
  Engine engine = Engine::Analytic;
  ModelParams params;
  SqueezeThermal state;
  std::vector<std::string> warnings;
  std::optional<SeDiagnostics> se;
  std::optional<tn::TdvpReport> tdvp;
  int n_max_used = 0;  // TDVP only
};

/// Builds a curve from sampled survival probabilities (gamma via
/// effective_decay_rate). tau must be strictly increasing and positive.
DecayCurve make_curve(std::vector<double> tau, std::vector<double> p_sur, Engine engine, const ModelParams& params,
                      const SqueezeThermal& st);

/// One P_sur and gamma per tau. The SE and TDVP engines evolve once to
/// max(tau) and sample the trajectory.
DecayCurve decay_curve(Engine engine, const ModelParams& params, const SqueezeThermal& st,
                       std::span<const double> tau_grid, const DecayOptions& opts = {});

enum class Regime { PureQze, PureQaze, Crossover };
std::string to_string(Regime r);

struct CrossoverReport {
  Regime regime = Regime::PureQze;
  std::vector<double> slope;  // d gamma / d tau at each grid point
  /// First sign change of the slope, refined by a quadratic through the three
  /// grid points around the extremum.
  std::optional<double> tau_c;
  /// True when the extremum at tau_c is a maximum (QZE below, QAZE above).
  bool qze_to_qaze = true;
  std::vector<double> sign_changes;  // every bracketed sign change, refined
};

/// Throws for fewer than 5 grid points.
CrossoverReport classify_and_crossover(const DecayCurve& curve);
CrossoverReport classify_and_crossover(std::span<const double> tau, std::span<const double> gamma);

/// Derivative of y(x) on a nonuniform grid: second-order central differences
/// inside, second-order one-sided stencils at the ends.
std::vector<double> finite_difference(std::span<const double> x, std::span<const double> y);

struct Interval {
  double begin;
  double end;
};

struct EnergyFlowOptions {
  double fit_window = 0.3;  // in units of g t
  /// Backflow when dE_m/dt < -threshold * omega0 * g^2.
  double backflow_threshold = 1e-6;
};

/// Raw input of the energy-flow analysis. The first sample must be t = 0.
struct EnergyFlowInput {
  std::vector<double> time;
  std::vector<double> sigma_z;
  std::vector<std::vector<double>> mode_number;  // [time][mode], original frame
};

struct EnergyFlow {
  std::vector<double> time;
  std::vector<double> e_tls;                 // Delta <sz> / 2
  std::vector<std::vector<double>> e_modes;  // [mode][time], omega_m (n_m(t) - n_m(0))
  double a1 = 0.0;
  double a2 = 0.0;
  int fit_samples = 0;
  bool qaze_enabling = false;  // a2 < 0
  std::vector<std::vector<Interval>> backflow;  // [mode]
  /// max |P_sur - (E_TLS / Delta + 1/2)|; NaN when Delta = 0.
  double identity_residual = 0.0;
};

/// Fits E_TLS / Delta = 1/2 - a1 (g t) - a2 (g t)^2 over 0 < g t <= fit_window
/// by least squares and finds backflow intervals. Throws when the fit window
/// holds fewer than 5 samples (g > 0).
EnergyFlow energy_flow_analysis(const EnergyFlowInput& in, const ModelParams& params,
                                const EnergyFlowOptions& opts = {});
EnergyFlowInput energy_flow_input(const tn::Trajectory& traj);
EnergyFlowInput energy_flow_input(const se::SeTrajectory& traj, const ModelParams& params, const SqueezeThermal& st);

/// Backflow intervals of one mode that lie inside [t0, t1].
bool has_backflow_in(const std::vector<Interval>& intervals, double t0, double t1);

struct AngleScan {
  std::vector<double> phi;
  std::vector<double> gamma;
  double tau = 0.0;
  bool degenerate = false;  // no phi dependence; extrema undefined
  double phi_max = 0.0;
  double phi_min = 0.0;
  double resolution = 0.0;
  /// phi_max - 0 and phi_min - pi, wrapped into (-pi, pi].
  double shift_max = 0.0;
  double shift_min = 0.0;
  /// phi_min - phi_max wrapped into [0, 2 pi).
  double separation = 0.0;
  double relative_depth = 0.0;  // (max - min) / mean
  std::vector<std::string> warnings;
};

/// gamma(phi) at fixed tau on a uniform grid over [0, 2 pi); extrema refined
/// by a parabola through the grid extremum and its periodic neighbours.
/// A grid coarser than pi/64 is accepted with a warning.
AngleScan critical_angle_scan(Engine engine, const ModelParams& params, const SqueezeThermal& st_template,
                              double tau, std::span<const double> phi_grid, const DecayOptions& opts = {});

/// Uniform grid of n points over [0, 2 pi).
std::vector<double> uniform_phi_grid(int n);

/// Angle wrapped into (-pi, pi].
double wrap_signed(double angle);

}  // namespace mqrm::zeno
