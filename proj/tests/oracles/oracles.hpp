#pragma once

// Reference values computed independently of the library code paths.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline double bose(double beta, double omega) { return 1.0 / std::expm1(beta * omega); }

inline double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

// Second-order rate of a qubit (splitting delta) coupled to modes
// omega_m = m+1, g_m^2 = (m+1) g^2, thermal occupation n_m:
//   tau sum_m g_m^2 [(1+n_m) sinc^2((w-D)tau/2) + n_m sinc^2((w+D)tau/2)].
inline double thermal_rate(int modes, double g, double delta, double beta, double tau) {
  double acc = 0.0;
  for (int m = 0; m < modes; ++m) {
    const double w = m + 1.0;
    const double n = std::isinf(beta) ? 0.0 : bose(beta, w);
    const double sm = sinc(0.5 * tau * (w - delta));
    const double sp = sinc(0.5 * tau * (w + delta));
    acc += (m + 1.0) * g * g * ((1.0 + n) * sm * sm + n * sp * sp);
  }
  return tau * acc;
}

// Rabi Hamiltonian of one qubit and one mode on b (x) spin (x) a with Fock
// cutoff 1 on both bosons, spin index 0 = up, written out element by element.
inline Eigen::MatrixXcd rabi_doubled_8x8(double delta, double omega, double g) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(8, 8);
  for (int b = 0; b < 2; ++b) {
    for (int s = 0; s < 2; ++s) {
      for (int n = 0; n < 2; ++n) {
        const int i = 4 * b + 2 * s + n;
        h(i, i) = (s == 0 ? 0.5 : -0.5) * delta + omega * n - omega * b;
        const int j = 4 * b + 2 * (1 - s) + (1 - n);
        h(i, j) = g;
      }
    }
  }
  return h;
}

inline Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXcd& h, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::VectorXcd phases =
      (std::complex<double>(0.0, -t) * es.eigenvalues().cast<std::complex<double>>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// Root of tan(x) = 2x on (pi/4, pi/2), by bisection.
inline double tan_equals_twice() {
  double lo = 1.0, hi = 1.5;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::tan(mid) - 2.0 * mid < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
