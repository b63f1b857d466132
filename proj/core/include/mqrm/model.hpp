#pragma once

// Multimode quantum Rabi model: parameters, squeezed-thermal initial state
// and the coefficients of the squeezing-transformed, thermofield-doubled
// Hamiltonian.
//
// Units: omega0 = 1 and k_B = 1 are the intended conventions; every
// frequency, coupling, rate and time is in units of omega0.

#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mqrm {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Inverse temperature beta = 1/(k_B T). Zero temperature is a distinct
/// value rather than a large float, so that the thermal angles vanish
/// exactly there.
class InverseTemperature {
 public:
  static InverseTemperature infinite() { return InverseTemperature(); }
  static InverseTemperature finite(double beta);
  /// Accepts "inf" (also "infinity", "INF") or a positive number.
  static InverseTemperature parse(std::string_view text);

  bool is_infinite() const { return infinite_; }
  /// +infinity for the zero-temperature value.
  double value() const;
  std::string to_string() const;

  friend bool operator==(const InverseTemperature&, const InverseTemperature&) = default;

 private:
  InverseTemperature() = default;
  bool infinite_ = true;
  double beta_ = 0.0;
};

struct Mode {
  double omega;     // (m+1) omega0
  double coupling;  // sqrt(m+1) g
};

class ModelParams {
 public:
  /// Throws std::invalid_argument unless omega0 > 0, g >= 0, num_modes >= 1.
  ModelParams(double delta, double omega0, double g, int num_modes);

  /// Resonant default delta = omega0 = 1.
  static ModelParams resonant(double g, int num_modes) { return {1.0, 1.0, g, num_modes}; }

  double delta() const { return delta_; }
  double omega0() const { return omega0_; }
  double g() const { return g_; }
  int num_modes() const { return num_modes_; }

  /// Largest mode frequency M omega0.
  double max_frequency() const { return num_modes_ * omega0_; }

  ModelParams with_g(double g) const { return {delta_, omega0_, g, num_modes_}; }
  ModelParams with_num_modes(int m) const { return {delta_, omega0_, g_, m}; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  double delta_;
  double omega0_;
  double g_;
  int num_modes_;
};

/// Ladder omega_m = (m+1) omega0, g_m = sqrt(m+1) g for m = 0..M-1.
std::vector<Mode> build_mode_table(const ModelParams& p);

/// Uniform squeezing xi = r e^{i phi} on top of a thermal state at beta.
class SqueezeThermal {
 public:
  /// r >= 0 and finite; phi is wrapped into [0, 2 pi).
  SqueezeThermal(double r, double phi, InverseTemperature beta);

  static SqueezeThermal thermal(InverseTemperature beta) { return {0.0, 0.0, beta}; }
  static SqueezeThermal vacuum() { return thermal(InverseTemperature::infinite()); }

  double r() const { return r_; }
  double phi() const { return phi_; }
  const InverseTemperature& beta() const { return beta_; }
  bool squeezed() const { return r_ != 0.0; }

  SqueezeThermal with_phi(double phi) const { return {r_, phi, beta_}; }
  SqueezeThermal with_r(double r) const { return {r, phi_, beta_}; }
  SqueezeThermal with_beta(InverseTemperature b) const { return {r_, phi_, b}; }

  friend bool operator==(const SqueezeThermal&, const SqueezeThermal&) = default;

 private:
  double r_;
  double phi_;
  InverseTemperature beta_;
};

/// Coefficients of S^dag(xi) H S(xi):
///   A = cosh^2 r + sinh^2 r, B = e^{i phi} cosh r sinh r,
///   K = cosh r + e^{i phi} sinh r.
struct SqueezeCoefficients {
  double A;
  cplx B;
  cplx K;
};

SqueezeCoefficients squeeze_coeffs(const SqueezeThermal& st);

/// Bogoliubov thermal angles theta_m = arctanh(exp(-beta omega_m / 2)).
/// All zero at infinite beta.
std::vector<double> thermal_angles(const SqueezeThermal& st, std::span<const Mode> modes);

/// Bose occupancy 1/(exp(beta omega) - 1); zero at infinite beta.
double bose_occupation(const InverseTemperature& beta, double omega);

}  // namespace mqrm
