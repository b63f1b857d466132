#pragma once

// Engine-agnostic term list of the squeezing-transformed, thermofield-doubled
// Hamiltonian
//
//   H = (Delta/2) sz
//     + sum_m omega_m [ A (a_m^+ a_m - b_m^+ b_m) + (B a_m^+2 - B b_m^2 + h.c.) ]
//     + sum_m g_m [ K cosh(theta_m) a_m^+ + K sinh(theta_m) b_m ] sx + h.c.
//
// and a sparse/dense assembler on a chain layout. The term order is fixed
// and zero-coefficient terms are kept, so two term lists can be compared
// coefficient by coefficient.

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "mqrm/model.hpp"
#include "mqrm/operators.hpp"
#include "mqrm/tn/layout.hpp"

namespace mqrm {

/// Alternative conventions for the B-quadratic terms, kept for comparison
/// runs and for exercising the Hermiticity checks.
struct QuadraticConvention {
  /// Fictitious-site term written as -B b^2 + B^* b^+2 (not Hermitian).
  bool appendix_c_sign = false;
  /// B-quadratics without the overall omega_m factor.
  bool appendix_c_omega = false;
};

struct SiteRef {
  SiteKind kind;
  int mode;  // -1 for the spin

  friend bool operator==(const SiteRef&, const SiteRef&) = default;
};

/// Product ops[0] * ops[1] * ... acting on a single site.
struct Factor {
  SiteRef site;
  std::vector<OpLabel> ops;
};

struct Term {
  cplx coeff;
  std::vector<Factor> factors;
  std::string tag;
};

struct HamiltonianTerms {
  std::vector<Term> terms;
};

HamiltonianTerms hamiltonian_terms(const ModelParams& p, const SqueezeThermal& st,
                                   const QuadraticConvention& conv = {});

/// Matrix of a single factor in a site basis of Fock cutoff n_max.
Eigen::MatrixXcd factor_matrix(const Factor& f, int n_max);

using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

struct SiteOperator {
  int site;
  Eigen::MatrixXcd op;
};

/// Sparse matrix of a product of site-local operators on the chain
/// (identity elsewhere). Basis index: site 0 is the most significant digit.
SparseMatrix embed_product(const tn::ChainLayout& layout, std::span<const SiteOperator> factors);

/// Sum of all terms on `layout`. Terms touching fictitious sites that the
/// layout does not carry are skipped when they act on fictitious sites only
/// (free, decoupled modes); a nonzero term coupling a missing site to a
/// present one throws std::invalid_argument.
SparseMatrix assemble_sparse(const HamiltonianTerms& h, const tn::ChainLayout& layout);
Eigen::MatrixXcd assemble_dense(const HamiltonianTerms& h, const tn::ChainLayout& layout);

}  // namespace mqrm
