#pragma once

// Lanczos propagator for exp(-i H t) v with H Hermitian and given only
// through its action. The error of each Krylov approximation is estimated
// from the last subdiagonal element; when the subspace is exhausted before
// the estimate drops below tolerance the interval is halved recursively.

#include <functional>

#include <Eigen/Dense>

namespace mqrm::tn {

using LinearMap = std::function<void(const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out)>;

struct KrylovStats {
  long long matvecs = 0;
  long long splits = 0;
  double max_error = 0.0;  // largest a-posteriori estimate, relative to |v|
  bool converged = true;
};

/// v <- exp(-i H t) v. `t` may be negative.
KrylovStats expm_krylov(const LinearMap& h, Eigen::MatrixXcd& v, double t, int krylov_dim, double tol,
                        int max_depth = 12);

}  // namespace mqrm::tn
