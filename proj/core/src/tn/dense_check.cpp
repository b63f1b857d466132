#include "mqrm/tn/dense_check.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mqrm/tn/krylov.hpp"

namespace mqrm::tn {

namespace {

SparseMatrix embed_one(const ChainLayout& layout, int site, const Eigen::MatrixXcd& op) {
  const SiteOperator f{site, op};
  return embed_product(layout, std::span<const SiteOperator>(&f, 1));
}

double expect(const SparseMatrix& op, const Eigen::VectorXcd& psi) { return psi.dot(op * psi).real(); }

Eigen::VectorXcd vacuum(const ChainLayout& layout) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout.hilbert_dim()));
  v(0) = 1.0;
  return v;
}

}  // namespace

void check_dense_guard(int num_modes, int n_max) {
  std::uint64_t dim = 2;
  for (int k = 0; k < 2 * num_modes; ++k) {
    dim *= static_cast<std::uint64_t>(n_max + 1);
    if (dim > kDenseDimLimit) {
      throw std::invalid_argument("dense check: 2 (n_max+1)^{2M} exceeds 2^16");
    }
  }
}

std::vector<Eigen::VectorXcd> dense_propagate(const SparseMatrix& h, const Eigen::VectorXcd& psi0,
                                              std::span<const double> times) {
  std::vector<Eigen::VectorXcd> out;
  if (h.rows() <= 2048) {
    const Eigen::MatrixXcd dense(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
    const Eigen::VectorXcd c0 = es.eigenvectors().adjoint() * psi0;
    for (double t : times) {
      Eigen::VectorXcd c(c0.size());
      for (Eigen::Index k = 0; k < c.size(); ++k) c(k) = std::polar(1.0, -es.eigenvalues()(k) * t) * c0(k);
      out.push_back(es.eigenvectors() * c);
    }
    return out;
  }
  LinearMap apply = [&h](const Eigen::MatrixXcd& in, Eigen::MatrixXcd& res) { res = h * in; };
  Eigen::MatrixXcd v = psi0;
  double t = 0.0;
  for (double target : times) {
    const double span = target - t;
    if (span > 0.0) {
      const auto st = expm_krylov(apply, v, span, 40, 1e-14, 20);
      if (!st.converged) throw std::runtime_error("dense Krylov propagation did not converge");
    }
    t = target;
    out.emplace_back(v.col(0));
  }
  return out;
}

DenseObservables dense_observables(const ChainLayout& layout, const ModelParams& p, const SqueezeThermal& st,
                                   const Eigen::VectorXcd& psi) {
  DenseObservables o;
  const double n2 = psi.squaredNorm();
  o.sigma_z = expect(embed_one(layout, layout.spin_index(), ops::spin(OpLabel::SigmaZ)), psi) / n2;
  o.p_sur = 0.5 * (o.sigma_z + 1.0);
  const auto modes = build_mode_table(p);
  const auto theta = thermal_angles(st, modes);
  const double cr = std::cosh(st.r());
  const cplx sr = std::polar(std::sinh(st.r()), st.phi());
  const Eigen::Index dim = static_cast<Eigen::Index>(layout.hilbert_dim());
  for (int m = 0; m < p.num_modes(); ++m) {
    const int ia = layout.physical_index(m);
    const int na = layout.site(ia).n_max();
    o.number_frame.push_back(expect(embed_one(layout, ia, ops::boson(OpLabel::Number, na)), psi) / n2);
    const double c = std::cosh(theta[static_cast<std::size_t>(m)]);
    const double s = std::sinh(theta[static_cast<std::size_t>(m)]);
    SparseMatrix l(dim, dim);
    l += cplx(cr * c) * embed_one(layout, ia, ops::boson(OpLabel::Annihilate, na));
    l += sr * c * embed_one(layout, ia, ops::boson(OpLabel::Create, na));
    const int ib = layout.fictitious_index(m);
    double extra = 0.0;
    if (ib >= 0) {
      const int nb = layout.site(ib).n_max();
      l += cplx(cr * s) * embed_one(layout, ib, ops::boson(OpLabel::Create, nb));
      l += sr * s * embed_one(layout, ib, ops::boson(OpLabel::Annihilate, nb));
    } else {
      extra = cr * cr * s * s;  // <b b^+> on an absent vacuum site
    }
    const Eigen::VectorXcd lpsi = l * psi;
    o.number_physical.push_back(lpsi.squaredNorm() / n2 + extra);
  }
  return o;
}

DenseCheckReport dense_check(const ModelParams& p, const SqueezeThermal& st, const NumericsConfig& cfg,
                             std::span<const double> times) {
  check_dense_guard(p.num_modes(), cfg.n_max);
  const ChainLayout layout = make_layout(p, st, cfg);
  DenseCheckReport rep;
  rep.dimension = layout.hilbert_dim();
  rep.times.assign(times.begin(), times.end());

  const auto traj = run_tdvp(p, st, cfg, times);
  rep.tdvp = traj.report;
  const SparseMatrix h = assemble_sparse(hamiltonian_terms(p, st, cfg.convention), layout);
  const auto states = dense_propagate(h, vacuum(layout), times);
  for (std::size_t k = 0; k < states.size(); ++k) {
    const auto ref = dense_observables(layout, p, st, states[k]);
    const auto& snap = traj.snapshots[k + 1];
    rep.max_p_sur_deviation = std::max(rep.max_p_sur_deviation, std::abs(ref.p_sur - snap.p_sur));
    rep.max_sigma_z_deviation = std::max(rep.max_sigma_z_deviation, std::abs(ref.sigma_z - snap.sigma_z));
    for (std::size_t m = 0; m < ref.number_frame.size(); ++m) {
      rep.max_number_deviation = std::max(rep.max_number_deviation, std::abs(ref.number_frame[m] - snap.number_frame[m]));
      rep.max_number_deviation =
          std::max(rep.max_number_deviation, std::abs(ref.number_physical[m] - snap.number_physical[m]));
    }
  }
  return rep;
}

DropEquivalence drop_equivalence(const ModelParams& p, const SqueezeThermal& st, int n_max,
                                 std::span<const double> times, const QuadraticConvention& conv) {
  if (!st.beta().is_infinite()) throw std::invalid_argument("fictitious modes decouple only at zero temperature");
  check_dense_guard(p.num_modes(), n_max);
  const auto terms = hamiltonian_terms(p, st, conv);
  const ChainLayout full = ChainLayout::doubled(p.num_modes(), n_max);
  const ChainLayout half = ChainLayout::physical_only(p.num_modes(), n_max);
  const auto s_full = dense_propagate(assemble_sparse(terms, full), vacuum(full), times);
  const auto s_half = dense_propagate(assemble_sparse(terms, half), vacuum(half), times);
  DropEquivalence out;
  for (std::size_t k = 0; k < s_full.size(); ++k) {
    const auto a = dense_observables(full, p, st, s_full[k]);
    const auto b = dense_observables(half, p, st, s_half[k]);
    out.max_p_sur_deviation = std::max(out.max_p_sur_deviation, std::abs(a.p_sur - b.p_sur));
    for (std::size_t m = 0; m < a.number_frame.size(); ++m) {
      out.max_number_deviation = std::max(out.max_number_deviation, std::abs(a.number_frame[m] - b.number_frame[m]));
      out.max_number_deviation =
          std::max(out.max_number_deviation, std::abs(a.number_physical[m] - b.number_physical[m]));
    }
  }
  return out;
}

}  // namespace mqrm::tn
