#include <vector>

#include <benchmark/benchmark.h>

#include "mqrm/analytic.hpp"
#include "mqrm/se_oracle.hpp"
#include "mqrm/tn/krylov.hpp"
#include "mqrm/tn/mpo.hpp"
#include "mqrm/tn/tdvp.hpp"

using namespace mqrm;

namespace {

void BM_AnalyticRate(benchmark::State& state) {
  const auto p = ModelParams::resonant(0.1, static_cast<int>(state.range(0)));
  const auto st = SqueezeThermal::thermal(InverseTemperature::finite(0.5));
  const analytic::RateQuery q(p, st, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(analytic::gamma_th(q));
}
BENCHMARK(BM_AnalyticRate)->Arg(15)->Arg(200);

void BM_SeEvolve(benchmark::State& state) {
  const auto p = ModelParams::resonant(0.1, static_cast<int>(state.range(0)));
  const auto st = SqueezeThermal::thermal(InverseTemperature::finite(0.5));
  const double t[] = {1.0};
  for (auto _ : state) benchmark::DoNotOptimize(se::se_sample(p, st, t, se::default_step(p), false));
}
BENCHMARK(BM_SeEvolve)->Arg(15)->Unit(benchmark::kMillisecond);

void BM_BuildMpo(benchmark::State& state) {
  const auto p = ModelParams::resonant(0.1, 15);
  const SqueezeThermal st(0.3, 1.0, InverseTemperature::finite(0.5));
  tn::NumericsConfig cfg;
  cfg.n_max = static_cast<int>(state.range(0));
  const auto layout = tn::make_layout(p, st, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(tn::build_mpo(p, st, layout, cfg));
}
BENCHMARK(BM_BuildMpo)->Arg(12)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_KrylovExp(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Random(n, n);
  h = (h + h.adjoint()).eval();
  const Eigen::MatrixXcd v0 = Eigen::MatrixXcd::Random(n, 1).normalized();
  const tn::LinearMap map = [&](const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out) { out.noalias() = h * in; };
  for (auto _ : state) {
    Eigen::MatrixXcd v = v0;
    benchmark::DoNotOptimize(tn::expm_krylov(map, v, 0.01, 10, 1e-12));
  }
}
BENCHMARK(BM_KrylovExp)->Arg(64)->Arg(512);

void BM_TdvpSteps(benchmark::State& state) {
  const auto p = ModelParams::resonant(0.1, 15);
  const SqueezeThermal st(0.3, 0.0, InverseTemperature::infinite());
  tn::NumericsConfig cfg;
  cfg.n_max = 12;
  cfg.d_max = static_cast<int>(state.range(0));
  cfg.dt = 0.01;
  const double t[] = {0.1};
  tn::TdvpOptions opts;
  opts.measure_modes = false;
  for (auto _ : state) benchmark::DoNotOptimize(tn::run_tdvp(p, st, cfg, t, opts));
}
BENCHMARK(BM_TdvpSteps)->Arg(6)->Arg(15)->Unit(benchmark::kMillisecond);

}  // namespace
