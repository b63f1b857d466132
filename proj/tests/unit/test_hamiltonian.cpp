#include <gtest/gtest.h>

#include "mqrm/hamiltonian.hpp"
#include "mqrm/operators.hpp"
#include "oracles.hpp"

using namespace mqrm;

TEST(Operators, LadderActionAndTruncation) {
  const int n = 4;
  const auto a = ops::boson(OpLabel::Annihilate, n);
  const auto ad = ops::boson(OpLabel::Create, n);
  ASSERT_EQ(a.rows(), n + 1);
  for (int k = 1; k <= n; ++k) EXPECT_NEAR(std::abs(a(k - 1, k)), std::sqrt(double(k)), 1e-15);
  EXPECT_TRUE(ad.isApprox(a.adjoint()));
  const Eigen::MatrixXcd num = ad * a;
  EXPECT_TRUE(num.isApprox(ops::boson(OpLabel::Number, n)));
  // [a, a^+] = 1 except on the top level
  const Eigen::MatrixXcd comm = a * ad - ad * a;
  for (int k = 0; k < n; ++k) EXPECT_NEAR(comm(k, k).real(), 1.0, 1e-14);
  EXPECT_NEAR(comm(n, n).real(), -double(n), 1e-14);
}

TEST(Operators, SpinConventions) {
  const auto sz = ops::spin(OpLabel::SigmaZ);
  EXPECT_EQ(sz(0, 0), cplx(1.0));
  EXPECT_EQ(sz(1, 1), cplx(-1.0));
  const auto sp = ops::spin(OpLabel::SigmaPlus);
  EXPECT_EQ(sp(0, 1), cplx(1.0));
  EXPECT_THROW(ops::make(SiteKind::Spin, OpLabel::Annihilate, 3), std::invalid_argument);
  EXPECT_THROW(ops::make(SiteKind::PhysicalBoson, OpLabel::SigmaX, 3), std::invalid_argument);
}

TEST(Hamiltonian, SingleModeMatchesHandBuiltMatrix) {
  const ModelParams p(1.0, 1.0, 0.1, 1);
  const auto layout = tn::ChainLayout::doubled(1, 1);
  const Eigen::MatrixXcd h = assemble_dense(hamiltonian_terms(p, SqueezeThermal::vacuum()), layout);
  const Eigen::MatrixXcd ref = oracle::rabi_doubled_8x8(1.0, 1.0, 0.1);
  EXPECT_LT((h - ref).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Hamiltonian, DetunedSingleModeMatchesHandBuiltMatrix) {
  const ModelParams p(0.7, 1.3, 0.25, 1);
  const auto layout = tn::ChainLayout::doubled(1, 1);
  const Eigen::MatrixXcd h = assemble_dense(hamiltonian_terms(p, SqueezeThermal::vacuum()), layout);
  const Eigen::MatrixXcd ref = oracle::rabi_doubled_8x8(0.7, 1.3, 0.25);
  EXPECT_LT((h - ref).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Hamiltonian, HermitianForSqueezedThermalInput) {
  const auto p = ModelParams::resonant(0.3, 2);
  const SqueezeThermal st(0.4, 1.1, InverseTemperature::finite(0.7));
  const Eigen::MatrixXcd h = assemble_dense(hamiltonian_terms(p, st), tn::ChainLayout::doubled(2, 2));
  EXPECT_LT((h - h.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Hamiltonian, PrintedFictitiousSignIsNotHermitian) {
  const auto p = ModelParams::resonant(0.3, 1);
  const SqueezeThermal st(0.4, 1.1, InverseTemperature::finite(0.7));
  QuadraticConvention conv;
  conv.appendix_c_sign = true;
  const Eigen::MatrixXcd h = assemble_dense(hamiltonian_terms(p, st, conv), tn::ChainLayout::doubled(1, 2));
  EXPECT_GT((h - h.adjoint()).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(Hamiltonian, VacuumEnergyIsHalfSplitting) {
  const auto p = ModelParams::resonant(0.2, 2);
  const SqueezeThermal st(0.3, 0.5, InverseTemperature::finite(0.5));
  const auto layout = tn::ChainLayout::doubled(2, 3);
  const Eigen::MatrixXcd h = assemble_dense(hamiltonian_terms(p, st), layout);
  // all-zero index: spin up, every boson empty
  EXPECT_NEAR(h(0, 0).real(), 0.5, 1e-15);
}

TEST(Hamiltonian, FreeTermsOnlyWithoutCoupling) {
  const auto p = ModelParams::resonant(0.0, 2);
  const auto layout = tn::ChainLayout::doubled(2, 2);
  const Eigen::MatrixXcd h = assemble_dense(hamiltonian_terms(p, SqueezeThermal::vacuum()), layout);
  EXPECT_TRUE(h.isDiagonal(0.0));
}
