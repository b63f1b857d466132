#include "mqrm/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace mqrm::analytic {

namespace {

constexpr double kTaylorThreshold = 1e-8;

// (x - sin x) / x^2, with a series where the subtraction loses digits.
double sine_remainder(double x) {
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    return x * (1.0 / 6.0 - x2 * (1.0 / 120.0 - x2 * (1.0 / 5040.0 - x2 / 362880.0)));
  }
  return (x - std::sin(x)) / (x * x);
}

double sum_thermal_rate(const RateQuery& q, double coupling_scale, double freq_scale) {
  const auto& p = q.params();
  const auto modes = build_mode_table(p);
  const auto theta = thermal_angles(q.state(), modes);
  const double tau = q.tau();
  double acc = 0.0;
  for (std::size_t m = 0; m < modes.size(); ++m) {
    const double w = freq_scale * modes[m].omega;
    const double g2 = coupling_scale * modes[m].coupling * modes[m].coupling;
    const double ch = std::cosh(theta[m]);
    const double sh = std::sinh(theta[m]);
    const double s_minus = sinc(0.5 * tau * (w - p.delta()));
    const double s_plus = sinc(0.5 * tau * (w + p.delta()));
    acc += g2 * (ch * ch * s_minus * s_minus + sh * sh * s_plus * s_plus);
  }
  return tau * acc;
}

}  // namespace

RateQuery::RateQuery(ModelParams params, SqueezeThermal st, double tau)
    : params_(params), st_(st), tau_(tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("measurement interval tau must be > 0");
}

double sinc(double x) {
  if (std::abs(x) < kTaylorThreshold) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double gamma_2nd(const RateQuery& q) {
  const auto modes = build_mode_table(q.params());
  const auto theta = thermal_angles(q.state(), modes);
  double acc = 0.0;
  for (std::size_t m = 0; m < modes.size(); ++m) {
    // cosh^2 + sinh^2 = cosh(2 theta) = coth(beta omega / 2)
    acc += modes[m].coupling * modes[m].coupling * std::cosh(2.0 * theta[m]);
  }
  return q.tau() * acc;
}

double gamma_th(const RateQuery& q) {
  if (q.state().squeezed()) {
    throw std::invalid_argument("gamma_th is defined for r = 0; use gamma_th_squeezed");
  }
  return sum_thermal_rate(q, 1.0, 1.0);
}

double gamma_th_squeezed(const RateQuery& q) {
  const auto c = squeeze_coeffs(q.state());
  return sum_thermal_rate(q, std::norm(c.K), c.A);
}

cplx kernel_F(double delta, double omega, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("kernel_F needs t > 0");
  const double x = (omega - delta) * t;
  if (std::abs(x) < kTaylorThreshold) return {0.5 * t, 0.0};
  const double s = sinc(0.5 * x);
  return {0.5 * t * s * s, -t * sine_remainder(x)};
}

cplx chi_short_time(const ModelParams& p, const SqueezeThermal& st, double t) {
  if (st.squeezed()) throw std::invalid_argument("chi_short_time is defined for r = 0");
  if (t == 0.0) return 1.0;
  if (!(t > 0.0)) throw std::invalid_argument("chi_short_time needs t >= 0");
  const auto modes = build_mode_table(p);
  const auto theta = thermal_angles(st, modes);
  cplx acc = 0.0;
  for (std::size_t m = 0; m < modes.size(); ++m) {
    const double g2 = modes[m].coupling * modes[m].coupling;
    const double ch = std::cosh(theta[m]);
    const double sh = std::sinh(theta[m]);
    acc += g2 * (ch * ch * kernel_F(p.delta(), modes[m].omega, t) +
                 sh * sh * kernel_F(p.delta(), -modes[m].omega, t));
  }
  return std::exp(-t * acc);
}

}  // namespace mqrm::analytic
