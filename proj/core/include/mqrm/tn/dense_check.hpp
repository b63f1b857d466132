#pragma once

// Brute-force reference: the full Hamiltonian as a sparse matrix, exact
// propagation of the doubled vacuum, and comparisons against TDVP.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mqrm/hamiltonian.hpp"
#include "mqrm/tn/config.hpp"
#include "mqrm/tn/tdvp.hpp"

namespace mqrm::tn {

/// Largest Hilbert dimension 2 (n_max+1)^{2M} accepted by the dense checker.
inline constexpr std::uint64_t kDenseDimLimit = 1ULL << 16;

/// Throws std::invalid_argument when 2 (n_max+1)^{2M} exceeds the limit.
void check_dense_guard(int num_modes, int n_max);

/// Exact states exp(-i H t_k) psi0 at the sample times. Uses a full
/// eigendecomposition up to dimension 2048 and Krylov stepping above.
std::vector<Eigen::VectorXcd> dense_propagate(const SparseMatrix& h, const Eigen::VectorXcd& psi0,
                                              std::span<const double> times);

struct DenseObservables {
  double p_sur;
  double sigma_z;
  std::vector<double> number_frame;
  std::vector<double> number_physical;
};

/// Observables of a dense state on `layout`, including the original-frame
/// occupation assembled as an explicit operator.
DenseObservables dense_observables(const ChainLayout& layout, const ModelParams& p, const SqueezeThermal& st,
                                   const Eigen::VectorXcd& psi);

struct DenseCheckReport {
  std::uint64_t dimension = 0;
  std::vector<double> times;
  double max_p_sur_deviation = 0.0;
  double max_sigma_z_deviation = 0.0;
  double max_number_deviation = 0.0;  // frame and physical numbers
  TdvpReport tdvp;
};

/// Runs TDVP with cfg and the dense reference on the same layout.
DenseCheckReport dense_check(const ModelParams& p, const SqueezeThermal& st, const NumericsConfig& cfg,
                             std::span<const double> times);

struct DropEquivalence {
  double max_p_sur_deviation = 0.0;
  double max_number_deviation = 0.0;
};

/// Zero temperature only: dense evolution on the doubled chain versus the
/// chain without fictitious modes.
DropEquivalence drop_equivalence(const ModelParams& p, const SqueezeThermal& st, int n_max,
                                 std::span<const double> times, const QuadraticConvention& conv = {});

}  // namespace mqrm::tn
