#pragma once

// Closed-form survival-probability decay rates.

#include "mqrm/model.hpp"

namespace mqrm::analytic {

/// A decay-rate request at measurement interval tau.
class RateQuery {
 public:
  /// Throws std::invalid_argument unless tau > 0.
  RateQuery(ModelParams params, SqueezeThermal st, double tau);

  const ModelParams& params() const { return params_; }
  const SqueezeThermal& state() const { return st_; }
  double tau() const { return tau_; }

  /// g tau >= 1: outside the short-interval regime the formulas assume.
  /// The rates are still returned; callers mark the point.
  bool beyond_validity() const { return params_.g() * tau_ >= 1.0; }

 private:
  ModelParams params_;
  SqueezeThermal st_;
  double tau_;
};

/// sin(x)/x; below |x| < 1e-8 the series 1 - x^2/6.
double sinc(double x);

/// Second-order rate tau * sum_m g_m^2 coth(beta omega_m / 2). Squeezing is ignored.
double gamma_2nd(const RateQuery& q);

/// Thermal rate
///   tau * sum_m g_m^2 [cosh^2 th_m sinc^2(tau(w_m - D)/2) + sinh^2 th_m sinc^2(tau(w_m + D)/2)].
/// Throws std::invalid_argument for r != 0.
double gamma_th(const RateQuery& q);

/// gamma_th with g_m^2 -> |K|^2 g_m^2 and omega_m -> A omega_m inside the
/// sinc arguments. Delta and the thermal angles stay unrenormalized.
double gamma_th_squeezed(const RateQuery& q);

/// Short-time memory kernel
///   F = 2 sin^2((w-D)t/2) / (t (w-D)^2) - i ((w-D)t - sin((w-D)t)) / (t (w-D)^2),
/// with the resonant limit F -> t/2.
cplx kernel_F(double delta, double omega, double t);

/// First-iteration excited amplitude
///   exp{-t sum_m g_m^2 [cosh^2 th_m F(D, w_m) + sinh^2 th_m F(D, -w_m)]}.
/// Requires r = 0 (throws otherwise).
cplx chi_short_time(const ModelParams& p, const SqueezeThermal& st, double t);

}  // namespace mqrm::analytic
