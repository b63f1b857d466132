#pragma once

// Effective-Hamiltonian contractions for single-site, two-site and bond
// (zero-site) updates. A left environment holds one bra x ket matrix per
// MPO bond index; a right environment one ket x bra matrix.

#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "mqrm/tn/mpo.hpp"

namespace mqrm::tn {

using Environment = std::vector<Eigen::MatrixXcd>;

struct LocalEntry {
  int out;  // s
  int in;   // s'
  cplx w;
};

struct LocalBlock {
  int a;
  int b;
  bool identity;
  std::vector<LocalEntry> entries;
};

/// MPO site with its nonzero blocks flattened for the contraction kernels.
struct LocalMpo {
  int rows = 0;
  int cols = 0;
  int dim = 0;
  std::vector<LocalBlock> blocks;
};

LocalMpo prepare_local(const MpoSite& site);
std::vector<LocalMpo> prepare_local(const TfdMpo& mpo);

Environment boundary_environment();

/// Left environment of sites 0..i from that of 0..i-1 and site tensor i.
Environment update_left(const Environment& left, const Eigen::MatrixXcd& t, const LocalMpo& w);
/// Right environment of sites i..N-1 from that of i+1..N-1 and site tensor i.
Environment update_right(const Environment& right, const Eigen::MatrixXcd& t, const LocalMpo& w);

/// H_eff acting on a dl x (d*dr) site tensor.
void apply_one_site(const Environment& left, const LocalMpo& w, const Environment& right, const Eigen::MatrixXcd& t,
                    Eigen::MatrixXcd& out);

/// H_eff acting on a bond matrix between two sites.
void apply_bond(const Environment& left, const Environment& right, const Eigen::MatrixXcd& c, Eigen::MatrixXcd& out);

/// H_eff acting on a two-site tensor with rows s1*dl + l and columns s2*dr + r.
void apply_two_site(const Environment& left, const LocalMpo& w1, const LocalMpo& w2, const Environment& right,
                    const Eigen::MatrixXcd& theta, Eigen::MatrixXcd& out);

/// Scalar <psi|H|psi> by a full left-to-right contraction.
cplx mpo_expectation(const std::vector<LocalMpo>& mpo, const std::vector<Eigen::MatrixXcd>& tensors);

}  // namespace mqrm::tn
