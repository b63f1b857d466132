#include "mqrm/tn/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace mqrm::tn {

namespace {

using cplx = std::complex<double>;

cplx inner(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a.array().conjugate() * b.array()).sum();
}

// One Krylov attempt; v always receives the approximation. Returns false when
// the error estimate stays above tol.
bool attempt(const LinearMap& h, Eigen::MatrixXcd& v, double t, int kdim, double tol, KrylovStats& st) {
  const double beta0 = v.norm();
  if (beta0 == 0.0) return true;
  std::vector<Eigen::MatrixXcd> basis;
  basis.reserve(static_cast<std::size_t>(kdim));
  basis.push_back(v / beta0);
  std::vector<double> alpha;
  std::vector<double> beta;
  Eigen::MatrixXcd w(v.rows(), v.cols());
  Eigen::VectorXcd coeffs;
  double err = 0.0;
  bool ok = true;
  for (int j = 0; j < kdim; ++j) {
    h(basis.back(), w);
    ++st.matvecs;
    const double a = inner(basis.back(), w).real();
    alpha.push_back(a);
    w -= a * basis.back();
    if (j > 0) w -= beta.back() * basis[static_cast<std::size_t>(j - 1)];
    for (const auto& q : basis) w -= inner(q, w) * q;
    const double b = w.norm();

    const auto n = static_cast<Eigen::Index>(alpha.size());
    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), n);
    Eigen::VectorXd sub = n > 1 ? Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(beta.data(), n - 1))
                                : Eigen::VectorXd(0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const Eigen::MatrixXd& u = es.eigenvectors();
    Eigen::VectorXcd phase(n);
    for (Eigen::Index k = 0; k < n; ++k) phase(k) = std::polar(1.0, -es.eigenvalues()(k) * t) * u(0, k);
    coeffs = u.cast<cplx>() * phase;

    err = b * std::abs(coeffs(n - 1));
    const bool invariant = b < 1e-14;
    if (invariant || err < tol) break;
    if (j + 1 == kdim) {
      ok = false;
      break;
    }
    beta.push_back(b);
    basis.push_back(w / b);
  }
  st.max_error = std::max(st.max_error, err);
  v.setZero();
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) v += (beta0 * coeffs(k)) * basis[static_cast<std::size_t>(k)];
  return ok;
}

void propagate(const LinearMap& h, Eigen::MatrixXcd& v, double t, int kdim, double tol, int depth, KrylovStats& st) {
  Eigen::MatrixXcd saved = v;
  KrylovStats local;
  if (attempt(h, v, t, kdim, tol, local)) {
    st.matvecs += local.matvecs;
    st.max_error = std::max(st.max_error, local.max_error);
    return;
  }
  st.matvecs += local.matvecs;
  if (depth == 0) {
    // Keep the last approximation and flag it.
    st.converged = false;
    st.max_error = std::max(st.max_error, local.max_error);
    return;
  }
  ++st.splits;
  v = std::move(saved);
  propagate(h, v, 0.5 * t, kdim, tol, depth - 1, st);
  propagate(h, v, 0.5 * t, kdim, tol, depth - 1, st);
}

}  // namespace

KrylovStats expm_krylov(const LinearMap& h, Eigen::MatrixXcd& v, double t, int krylov_dim, double tol,
                        int max_depth) {
  KrylovStats st;
  propagate(h, v, t, krylov_dim, tol, max_depth, st);
  return st;
}

}  // namespace mqrm::tn
