#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "mqrm/hamiltonian.hpp"
#include "mqrm/tn/dense_check.hpp"
#include "mqrm/tn/environment.hpp"
#include "mqrm/tn/krylov.hpp"
#include "mqrm/tn/mpo.hpp"
#include "mqrm/tn/mps.hpp"
#include "mqrm/tn/observables.hpp"
#include "mqrm/tn/snapshot_io.hpp"
#include "mqrm/tn/tdvp.hpp"
#include "oracles.hpp"

using namespace mqrm;
using namespace mqrm::tn;

namespace {

Eigen::MatrixXcd random_hermitian(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(dist(rng), dist(rng));
  return 0.5 * (m + m.adjoint());
}

std::vector<double> grid(double t_final, int n) {
  std::vector<double> t;
  for (int k = 1; k <= n; ++k) t.push_back(t_final * k / n);
  return t;
}

}  // namespace

TEST(Layout, DoubledOrdering) {
  const auto l = ChainLayout::doubled(3, 4);
  ASSERT_EQ(l.size(), 7);
  EXPECT_EQ(l.spin_index(), 3);
  EXPECT_EQ(l.site(3).kind, SiteKind::Spin);
  EXPECT_EQ(l.fictitious_index(0), 2);
  EXPECT_EQ(l.fictitious_index(2), 0);
  EXPECT_EQ(l.physical_index(0), 4);
  EXPECT_EQ(l.physical_index(2), 6);
  EXPECT_EQ(l.site(0).dim, 5);
  EXPECT_EQ(l.hilbert_dim(), 2u * 5 * 5 * 5 * 5 * 5 * 5);
}

TEST(Layout, PhysicalOnly) {
  const auto l = ChainLayout::physical_only(2, 3);
  ASSERT_EQ(l.size(), 3);
  EXPECT_EQ(l.spin_index(), 0);
  EXPECT_EQ(l.fictitious_index(0), -1);
  const auto caps = l.max_bond_dims(100);
  EXPECT_EQ(caps, (std::vector<int>{2, 4}));
}

TEST(Mpo, ContractionEqualsAssemblyAndIsHermitian) {
  const auto p = ModelParams::resonant(0.3, 2);
  const SqueezeThermal st(0.3, kPi / 2, InverseTemperature::finite(0.5));
  NumericsConfig cfg;
  cfg.n_max = 3;
  const auto layout = ChainLayout::doubled(2, 3);
  const auto mpo = build_mpo(p, st, layout, cfg);
  const Eigen::MatrixXcd h = mpo.to_dense();
  const Eigen::MatrixXcd ref = assemble_dense(hamiltonian_terms(p, st), layout);
  EXPECT_LT((h - ref).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((h - h.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Mpo, SingleModeMatchesHandBuiltMatrix) {
  NumericsConfig cfg;
  cfg.n_max = 1;
  cfg.drop_fictitious_at_T0 = false;
  const auto p = ModelParams::resonant(0.1, 1);
  const auto mpo = build_mpo(p, SqueezeThermal::vacuum(), ChainLayout::doubled(1, 1), cfg);
  EXPECT_LT((mpo.to_dense() - oracle::rabi_doubled_8x8(1.0, 1.0, 0.1)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Mpo, HermiticityCheckCatchesPrintedSign) {
  NumericsConfig cfg;
  cfg.n_max = 2;
  cfg.convention.appendix_c_sign = true;
  const auto p = ModelParams::resonant(0.1, 1);
  const SqueezeThermal st(0.3, 0.0, InverseTemperature::finite(0.5));
  EXPECT_THROW(build_mpo(p, st, ChainLayout::doubled(1, 2), cfg), HermiticityError);
}

TEST(Mpo, DecoupledVacuumIsLowestWithEnergyMinusHalf) {
  // ground state of the doubled, decoupled Hamiltonian restricted to the
  // frame vacuum of the bosons: spin down, E = -Delta/2
  NumericsConfig cfg;
  cfg.n_max = 2;
  const auto p = ModelParams::resonant(0.0, 2);
  const auto layout = ChainLayout::physical_only(2, 2);
  const auto mpo = build_mpo(p, SqueezeThermal::vacuum(), layout, cfg);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mpo.to_dense());
  EXPECT_NEAR(es.eigenvalues()(0), -0.5, 1e-14);
}

TEST(Mps, ProductVacuumObservables) {
  for (const auto& layout : {ChainLayout::doubled(3, 4), ChainLayout::physical_only(3, 4)}) {
    const auto psi = initial_mps(layout);
    const auto p = ModelParams::resonant(0.1, 3);
    const SqueezeThermal st(0.0, 0.0, InverseTemperature::finite(1.0));
    Measurer m(psi, p, st);
    EXPECT_EQ(psi.norm_squared(), 1.0);
    EXPECT_DOUBLE_EQ(m.sigma_z(), 1.0);
    for (int k = 0; k < 3; ++k) {
      EXPECT_EQ(m.frame_number(k), 0.0);
      if (layout.has_fictitious()) EXPECT_EQ(m.fictitious_number(k), 0.0);
    }
  }
}

TEST(Mps, PaddingAndCanonicalizationKeepTheState) {
  const auto layout = ChainLayout::doubled(2, 3);
  NumericsConfig cfg;
  cfg.n_max = 3;
  cfg.d_max = 5;
  const auto p = ModelParams::resonant(0.2, 2);
  const SqueezeThermal st(0.2, 1.0, InverseTemperature::finite(0.8));
  const double times[] = {1.0};
  TdvpOptions opts;
  opts.keep_states = true;
  const auto traj = run_tdvp(p, st, cfg, times, opts);
  auto psi = *traj.snapshots.back().state;
  const Eigen::VectorXcd before = psi.to_dense();
  psi.pad_bonds(12);
  EXPECT_LT((psi.to_dense() - before).norm(), 1e-12);
  psi.canonicalize(2);
  EXPECT_LT((psi.to_dense() - before).norm(), 1e-12);
  for (int i = 0; i < 2; ++i) {
    const Eigen::MatrixXcd l = to_left_grouped(psi.tensor(i), psi.dim(i));
    EXPECT_TRUE((l.adjoint() * l).isIdentity(1e-12));
  }
  for (int i = 3; i < psi.size(); ++i) {
    const Eigen::MatrixXcd& r = psi.tensor(i);
    EXPECT_TRUE((r * r.adjoint()).isIdentity(1e-12));
  }
}

TEST(Krylov, MatchesExactExponential) {
  const int n = 60;
  const Eigen::MatrixXcd h = random_hermitian(n, 7);
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(n, 1);
  v(0, 0) = 1.0;
  v(5, 0) = cplx(0.0, 1.0);
  v /= v.norm();
  for (double t : {0.3, -1.1, 4.0}) {
    Eigen::MatrixXcd w = v;
    const auto stats = expm_krylov([&](const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out) { out = h * in; }, w, t,
                                   12, 1e-12);
    EXPECT_TRUE(stats.converged);
    EXPECT_LT((w - oracle::expm_hermitian(h, t) * v).norm(), 1e-10) << "t " << t;
  }
}

TEST(Environment, VacuumEnergyIsHalfSplitting) {
  const auto p = ModelParams::resonant(0.3, 3);
  const SqueezeThermal st(0.3, 0.4, InverseTemperature::finite(0.5));
  NumericsConfig cfg;
  cfg.n_max = 4;
  const auto layout = ChainLayout::doubled(3, 4);
  const auto local = prepare_local(build_mpo(p, st, layout, cfg));
  const auto psi = initial_mps(layout);
  std::vector<Eigen::MatrixXcd> tensors;
  for (int i = 0; i < psi.size(); ++i) tensors.push_back(psi.tensor(i));
  EXPECT_NEAR(std::abs(mpo_expectation(local, tensors) - cplx(0.5)), 0.0, 1e-14);
}

TEST(Observables, SpecGrammar) {
  EXPECT_EQ(ObservableSpec::parse("sz").kind, ObservableKind::SigmaZ);
  EXPECT_EQ(ObservableSpec::parse("n_phys(3)").mode, 3);
  EXPECT_EQ(ObservableSpec::parse("e(0)").kind, ObservableKind::ModeEnergy);
  EXPECT_THROW(ObservableSpec::parse("n()"), std::invalid_argument);
  EXPECT_THROW(ObservableSpec::parse("magnetization"), std::invalid_argument);
}

TEST(Observables, ThermalOccupancyWithoutCoupling) {
  const auto p = ModelParams::resonant(0.0, 3);
  const auto st = SqueezeThermal::thermal(InverseTemperature::finite(0.5));
  NumericsConfig cfg;
  cfg.n_max = 6;
  const double times[] = {0.5};
  const auto traj = run_tdvp(p, st, cfg, times);
  for (const auto& s : traj.snapshots) {
    EXPECT_NEAR(s.sigma_z, 1.0, 1e-14);
    for (int m = 0; m < 3; ++m) EXPECT_NEAR(s.number_physical[m], oracle::bose(0.5, m + 1.0), 1e-12);
  }
  EXPECT_NEAR(oracle::bose(0.5, 1.0), 1.54149, 1e-5);
}

TEST(Tdvp, DecoupledQubitSurvives) {
  const auto p = ModelParams::resonant(0.0, 2);
  NumericsConfig cfg;
  cfg.n_max = 3;
  const auto traj = run_tdvp(p, SqueezeThermal::thermal(InverseTemperature::finite(1.0)), cfg, grid(1.0, 5));
  for (const auto& s : traj.snapshots) EXPECT_NEAR(s.p_sur, 1.0, 1e-13);
}

TEST(Tdvp, SingleModeRabiAgainstDense) {
  const auto p = ModelParams::resonant(0.2, 1);
  NumericsConfig cfg;
  cfg.n_max = 8;
  const auto rep = dense_check(p, SqueezeThermal::vacuum(), cfg, grid(1.0 / p.g(), 20));
  EXPECT_LT(rep.max_p_sur_deviation, 1e-6);
  EXPECT_LT(rep.tdvp.max_norm_drift, 1e-8);
}

TEST(Tdvp, SqueezedThermalSingleModeAgainstDense) {
  const auto p = ModelParams::resonant(0.1, 1);
  const SqueezeThermal st(0.3, kPi / 2, InverseTemperature::finite(0.5));
  NumericsConfig cfg;
  cfg.n_max = 3;
  const auto rep = dense_check(p, st, cfg, grid(1.0 / p.g(), 20));
  EXPECT_LT(rep.max_p_sur_deviation, 1e-6);
  EXPECT_LT(rep.max_number_deviation, 1e-6);
  EXPECT_LT(rep.tdvp.max_relative_energy_drift, 1e-6);
}

TEST(Tdvp, FictitiousDropIsExactAtZeroTemperature) {
  const auto p = ModelParams::resonant(0.1, 2);
  const SqueezeThermal st(0.3, 1.0, InverseTemperature::infinite());
  const auto eq = drop_equivalence(p, st, 3, grid(10.0, 10));
  EXPECT_LT(eq.max_p_sur_deviation, 1e-10);
  EXPECT_LT(eq.max_number_deviation, 1e-10);
}

TEST(Tdvp, TailWarningAtSmallCutoff) {
  const auto p = ModelParams::resonant(0.5, 1);
  NumericsConfig cfg;
  cfg.n_max = 2;
  const auto traj = run_tdvp(p, SqueezeThermal::vacuum(), cfg, grid(3.0, 5));
  EXPECT_TRUE(traj.report.tail_warning);
  EXPECT_FALSE(traj.report.converged());
  EXPECT_FALSE(traj.report.warnings.empty());
}

TEST(DenseCheck, GuardRejectsLargeSystems) {
  EXPECT_NO_THROW(check_dense_guard(2, 3));
  EXPECT_THROW(check_dense_guard(4, 10), std::invalid_argument);
}

TEST(Snapshot, RoundTrip) {
  const auto p = ModelParams::resonant(0.2, 2);
  const SqueezeThermal st(0.2, 0.7, InverseTemperature::finite(1.0));
  NumericsConfig cfg;
  cfg.n_max = 3;
  cfg.d_max = 6;
  const double times[] = {0.5};
  TdvpOptions opts;
  opts.keep_states = true;
  const auto traj = run_tdvp(p, st, cfg, times, opts);
  const auto& psi = *traj.snapshots.back().state;
  std::stringstream buf;
  write_snapshot(buf, 0.5, psi);
  const auto back = read_snapshot(buf);
  EXPECT_EQ(back.time, 0.5);
  EXPECT_EQ(back.state.layout(), psi.layout());
  EXPECT_EQ(back.state.center(), psi.center());
  for (int i = 0; i < psi.size(); ++i) EXPECT_EQ(back.state.tensor(i), psi.tensor(i));
}

TEST(Snapshot, RejectsCorruptInput) {
  std::stringstream bad("NOTASNAPSHOT");
  EXPECT_THROW(read_snapshot(bad), std::runtime_error);
  const auto psi = initial_mps(ChainLayout::doubled(1, 2));
  std::stringstream buf;
  write_snapshot(buf, 0.0, psi);
  std::string bytes = buf.str();
  bytes.resize(bytes.size() - 5);
  std::stringstream truncated(bytes);
  EXPECT_THROW(read_snapshot(truncated), std::runtime_error);
}
