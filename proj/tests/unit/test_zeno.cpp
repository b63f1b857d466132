#include <cmath>

#include <gtest/gtest.h>

#include "mqrm/analytic.hpp"
#include "mqrm/se_oracle.hpp"
#include "mqrm/zeno.hpp"
#include "oracles.hpp"

using namespace mqrm;
using namespace mqrm::zeno;

namespace {

std::vector<double> tau_grid(double step, double last) {
  std::vector<double> t;
  for (int k = 1; k * step <= last + 1e-12; ++k) t.push_back(k * step);
  return t;
}

}  // namespace

TEST(DecayRate, ReferenceValues) {
  EXPECT_EQ(effective_decay_rate(1.0, 0.3), 0.0);
  EXPECT_NEAR(effective_decay_rate(std::exp(-0.01), 0.1), 0.1, 1e-15);
  EXPECT_NEAR(effective_decay_rate(std::pow(std::cos(0.05), 2), 0.5), 5.003e-3, 1e-6);
  EXPECT_THROW(effective_decay_rate(0.0, 0.1), std::invalid_argument);
  EXPECT_THROW(effective_decay_rate(1.1, 0.1), std::invalid_argument);
  EXPECT_THROW(effective_decay_rate(0.5, 0.0), std::invalid_argument);
}

TEST(DecayRate, RepeatedMeasurements) {
  EXPECT_EQ(survival_n_measurements(0.7, 1), 0.7);
  EXPECT_NEAR(survival_n_measurements(0.99, 100), 0.36603, 1e-5);
  EXPECT_EQ(survival_n_measurements(1.0, 1000), 1.0);
  EXPECT_THROW(survival_n_measurements(0.5, 0), std::invalid_argument);
}

TEST(Engine, ParseNames) {
  EXPECT_EQ(parse_engine("tdvp"), Engine::Tdvp);
  EXPECT_EQ(to_string(Engine::Se), "se");
  EXPECT_THROW(parse_engine("exact"), std::invalid_argument);
}

TEST(DecayCurve, AnalyticEngineIsGammaTh) {
  const auto p = ModelParams::resonant(0.1, 15);
  const auto st = SqueezeThermal::thermal(InverseTemperature::finite(0.5));
  const auto taus = tau_grid(0.05, 1.0);
  const auto c = decay_curve(Engine::Analytic, p, st, taus);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    EXPECT_EQ(c.gamma[i], analytic::gamma_th(analytic::RateQuery(p, st, taus[i])));
    EXPECT_NEAR(c.p_sur[i], std::exp(-c.gamma[i] * taus[i]), 1e-15);
  }
}

TEST(DecayCurve, SingleModeIsPureZeno) {
  for (double g : {0.01, 0.2}) {
    const auto p = ModelParams::resonant(g, 1);
    const auto taus = tau_grid(0.01, 1.0);
    for (auto engine : {Engine::Analytic, Engine::Se}) {
      const auto c = decay_curve(engine, p, SqueezeThermal::vacuum(), taus);
      for (std::size_t i = 1; i < c.gamma.size(); ++i) EXPECT_GT(c.gamma[i], c.gamma[i - 1]);
      EXPECT_EQ(classify_and_crossover(c).regime, Regime::PureQze);
    }
  }
}

TEST(DecayCurve, FifteenModesCrossOver) {
  const auto p = ModelParams::resonant(0.1, 15);
  const auto c = decay_curve(Engine::Analytic, p, SqueezeThermal::vacuum(), tau_grid(0.01, 1.0));
  const auto rep = classify_and_crossover(c);
  EXPECT_EQ(rep.regime, Regime::Crossover);
  ASSERT_TRUE(rep.tau_c);
  EXPECT_GE(*rep.tau_c, 0.15);
  EXPECT_LE(*rep.tau_c, 0.3);
  EXPECT_TRUE(rep.qze_to_qaze);
}

TEST(DecayCurve, ZeroCouplingGivesZeroRate) {
  const auto p = ModelParams::resonant(0.0, 4);
  for (auto engine : {Engine::Analytic, Engine::Se}) {
    const auto c = decay_curve(engine, p, SqueezeThermal::vacuum(), tau_grid(0.1, 1.0));
    for (double g : c.gamma) EXPECT_NEAR(g, 0.0, 1e-12);
  }
}

TEST(DecayCurve, EngineParameterErrors) {
  const auto p = ModelParams::resonant(0.1, 2);
  const SqueezeThermal sq(0.3, 0.0, InverseTemperature::infinite());
  const double taus[] = {0.1, 0.2};
  EXPECT_THROW(decay_curve(Engine::Se, p, sq, taus), std::invalid_argument);
  EXPECT_THROW(decay_curve(Engine::Analytic, p, sq, taus), std::invalid_argument);
  DecayOptions o;
  o.squeezed_analytic = true;
  EXPECT_NO_THROW(decay_curve(Engine::Analytic, p, sq, taus, o));
  const double bad[] = {0.2, 0.1};
  EXPECT_THROW(decay_curve(Engine::Analytic, p, SqueezeThermal::vacuum(), bad), std::invalid_argument);
}

TEST(DecayCurve, WarnsOutsideShortIntervalRegime) {
  const auto p = ModelParams::resonant(0.5, 1);
  const double taus[] = {1.0, 2.0, 3.0};
  const auto c = decay_curve(Engine::Analytic, p, SqueezeThermal::vacuum(), taus);
  EXPECT_FALSE(c.warnings.empty());
}

TEST(DecayCurve, TdvpMatchesSeForSingleModeAtWeakCoupling) {
  // Without squeezing the counter-rotating channel only adds O(g^2/omega^2).
  const auto p = ModelParams::resonant(0.01, 1);
  const double taus[] = {0.2, 0.4, 0.6, 0.8, 1.0};
  DecayOptions o;
  o.numerics.n_max = 4;
  const auto t = decay_curve(Engine::Tdvp, p, SqueezeThermal::vacuum(), taus, o);
  const auto s = decay_curve(Engine::Se, p, SqueezeThermal::vacuum(), taus, o);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(t.gamma[i] / s.gamma[i], 1.0, 0.02);
  ASSERT_TRUE(t.tdvp);
  EXPECT_LT(t.tdvp->max_norm_drift, 1e-8);
}

TEST(Crossover, MonotoneCurveIsPureZeno) {
  std::vector<double> tau, gamma;
  for (int k = 1; k <= 50; ++k) {
    tau.push_back(0.02 * k);
    gamma.push_back(std::sqrt(tau.back()));
  }
  const auto rep = classify_and_crossover(tau, gamma);
  EXPECT_EQ(rep.regime, Regime::PureQze);
  EXPECT_FALSE(rep.tau_c);
}

TEST(Crossover, SyntheticSincSquaredMaximum) {
  // gamma = tau sinc^2(7 tau) peaks where tan(7 tau) = 14 tau.
  const double exact = oracle::tan_equals_twice() / 7.0;
  EXPECT_NEAR(exact, 0.16651, 1e-5);
  for (double h : {0.01, 0.005}) {
    std::vector<double> tau, gamma;
    for (int k = 1; k * h <= 0.4 + 1e-12; ++k) {
      tau.push_back(k * h);
      gamma.push_back(tau.back() * std::pow(oracle::sinc(7.0 * tau.back()), 2));
    }
    const auto rep = classify_and_crossover(tau, gamma);
    ASSERT_TRUE(rep.tau_c);
    EXPECT_EQ(rep.regime, Regime::Crossover);
    EXPECT_NEAR(*rep.tau_c, exact, h);
  }
}

TEST(Crossover, DecreasingCurveIsPureAntiZeno) {
  std::vector<double> tau, gamma;
  for (int k = 1; k <= 10; ++k) {
    tau.push_back(0.1 * k);
    gamma.push_back(1.0 / tau.back());
  }
  EXPECT_EQ(classify_and_crossover(tau, gamma).regime, Regime::PureQaze);
}

TEST(Crossover, NeedsFivePoints) {
  const std::vector<double> t{0.1, 0.2, 0.3, 0.4}, g{1, 2, 3, 4};
  EXPECT_THROW(classify_and_crossover(t, g), std::invalid_argument);
}

TEST(FiniteDifference, ExactForQuadraticsOnUnevenGrid) {
  const std::vector<double> x{0.0, 0.1, 0.25, 0.3, 0.7, 1.0};
  std::vector<double> y;
  for (double v : x) y.push_back(3 * v * v - v + 2);
  const auto d = finite_difference(x, y);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(d[i], 6 * x[i] - 1, 1e-12);
}

TEST(EnergyFlow, ZeroCoupling) {
  const auto p = ModelParams::resonant(0.0, 3);
  EnergyFlowInput in;
  for (int k = 0; k <= 20; ++k) {
    in.time.push_back(0.1 * k);
    in.sigma_z.push_back(1.0);
    in.mode_number.push_back({0.0, 0.0, 0.0});
  }
  const auto f = energy_flow_analysis(in, p);
  EXPECT_EQ(f.a1, 0.0);
  EXPECT_EQ(f.a2, 0.0);
  for (const auto& e : f.e_modes)
    for (double v : e) EXPECT_EQ(v, 0.0);
  for (double e : f.e_tls) EXPECT_EQ(e, 0.5);
}

TEST(EnergyFlow, VacuumRabiFit) {
  // 1/2 - E_TLS/Delta = sin^2(g t) = x^2 - x^4/3 + ...
  const double g = 0.01;
  const auto p = ModelParams::resonant(g, 1);
  std::vector<double> times;
  for (int k = 1; k <= 100; ++k) times.push_back(0.3 / g * k / 100);
  const auto traj = se::se_sample(p, SqueezeThermal::vacuum(), times, 0.05);
  const auto f = energy_flow_analysis(energy_flow_input(traj, p, SqueezeThermal::vacuum()), p);
  EXPECT_EQ(f.fit_samples, 100);
  EXPECT_NEAR(f.a1, 0.0, 0.01);
  EXPECT_NEAR(f.a2, 1.0, 0.05);
  EXPECT_FALSE(f.qaze_enabling);
  EXPECT_TRUE(f.backflow[0].empty());
  EXPECT_LT(f.identity_residual, 1e-10);
}

TEST(EnergyFlow, HighModesReturnEnergyNearCrossover) {
  const auto p = ModelParams::resonant(0.1, 15);
  const auto st = SqueezeThermal::thermal(InverseTemperature::finite(0.5));
  std::vector<double> times;
  for (int k = 1; k <= 300; ++k) times.push_back(3.0 * k / 300);
  const auto traj = se::se_sample(p, st, times, se::default_step(p), false);
  const auto f = energy_flow_analysis(energy_flow_input(traj, p, st), p);
  EXPECT_TRUE(f.qaze_enabling);
  bool high = false;
  for (int m = 8; m < 15; ++m) high |= has_backflow_in(f.backflow[m], 0.1, 0.35);
  EXPECT_TRUE(high);
  EXPECT_TRUE(f.backflow[0].empty() || f.backflow[0].front().begin > 1.0);
}

TEST(EnergyFlow, RejectsShortWindow) {
  const auto p = ModelParams::resonant(0.1, 1);
  EnergyFlowInput in;
  for (int k = 0; k <= 3; ++k) {
    in.time.push_back(0.5 * k);
    in.sigma_z.push_back(1.0);
    in.mode_number.push_back({0.0});
  }
  EXPECT_THROW(energy_flow_analysis(in, p), std::invalid_argument);
}

TEST(AngleScan, SingleModeAnalyticExtrema) {
  const auto p = ModelParams::resonant(0.01, 1);
  const SqueezeThermal st(0.3, 0.0, InverseTemperature::infinite());
  DecayOptions o;
  const auto s = critical_angle_scan(Engine::Analytic, p, st, 0.01, uniform_phi_grid(128), o);
  EXPECT_FALSE(s.degenerate);
  EXPECT_NEAR(wrap_signed(s.phi_max), 0.0, kPi / 64);
  EXPECT_NEAR(s.phi_min, kPi, kPi / 64);
  EXPECT_NEAR(s.separation, kPi, 1e-9);
  EXPECT_TRUE(s.warnings.empty());
}

TEST(AngleScan, NoSqueezingIsDegenerate) {
  const auto p = ModelParams::resonant(0.1, 3);
  const auto s =
      critical_angle_scan(Engine::Analytic, p, SqueezeThermal::vacuum(), 0.1, uniform_phi_grid(16));
  EXPECT_TRUE(s.degenerate);
  EXPECT_TRUE(std::isnan(s.phi_max));
  for (double g : s.gamma) EXPECT_EQ(g, s.gamma.front());
}

TEST(AngleScan, CoarseGridWarnsAndSeIsRejected) {
  const auto p = ModelParams::resonant(0.1, 1);
  const SqueezeThermal st(0.3, 0.0, InverseTemperature::infinite());
  EXPECT_FALSE(critical_angle_scan(Engine::Analytic, p, st, 0.1, uniform_phi_grid(32)).warnings.empty());
  EXPECT_THROW(critical_angle_scan(Engine::Se, p, st, 0.1, uniform_phi_grid(32)), std::invalid_argument);
  const std::vector<double> uneven{0.0, 1.0, 4.0};
  EXPECT_THROW(critical_angle_scan(Engine::Analytic, p, st, 0.1, uneven), std::invalid_argument);
}

TEST(AngleScan, WrapSigned) {
  EXPECT_NEAR(wrap_signed(1.5 * kPi), -0.5 * kPi, 1e-15);
  EXPECT_NEAR(wrap_signed(-kPi), kPi, 1e-15);
  EXPECT_NEAR(wrap_signed(0.25), 0.25, 1e-15);
}
