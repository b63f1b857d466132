#include "mqrm/tn/mpo.hpp"

#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

namespace mqrm::tn {

namespace {

SparseMatrix sparse_of(const Eigen::MatrixXcd& m) {
  SparseMatrix s = m.sparseView();
  s.makeCompressed();
  return s;
}

MpoBlock block_of(const Eigen::MatrixXcd& m) { return {sparse_of(m), false}; }

MpoBlock identity_block(int d) {
  SparseMatrix s(d, d);
  s.setIdentity();
  return {s, true};
}

// Full 3x3 W for a site, before boundary selection.
std::vector<std::optional<MpoBlock>> full_w(const ModelParams& p, const SqueezeThermal& st, const SiteSpec& site,
                                            const QuadraticConvention& conv) {
  std::vector<std::optional<MpoBlock>> w(9);
  auto set = [&w](int a, int b, MpoBlock blk) { w[static_cast<std::size_t>(a * 3 + b)] = std::move(blk); };
  const int d = site.dim;
  switch (site.kind) {
    case SiteKind::FictitiousBoson: {
      const auto blocks = mode_blocks(p, st, site.mode, site.n_max(), conv);
      set(0, 0, identity_block(d));
      set(1, 1, identity_block(d));
      set(2, 0, block_of(blocks.h_b));
      set(2, 1, block_of(blocks.g_b));
      set(2, 2, identity_block(d));
      break;
    }
    case SiteKind::Spin: {
      set(0, 0, identity_block(d));
      set(1, 0, block_of(ops::spin(OpLabel::SigmaX)));
      set(2, 0, block_of(0.5 * p.delta() * ops::spin(OpLabel::SigmaZ)));
      set(2, 1, block_of(ops::spin(OpLabel::SigmaX)));
      set(2, 2, identity_block(d));
      break;
    }
    case SiteKind::PhysicalBoson: {
      const auto blocks = mode_blocks(p, st, site.mode, site.n_max(), conv);
      set(0, 0, identity_block(d));
      set(1, 0, block_of(blocks.g_a));
      set(1, 1, identity_block(d));
      set(2, 0, block_of(blocks.h_a));
      set(2, 2, identity_block(d));
      break;
    }
  }
  return w;
}

}  // namespace

ModeBlocks mode_blocks(const ModelParams& p, const SqueezeThermal& st, int mode, int n_max,
                       const QuadraticConvention& conv) {
  const auto modes = build_mode_table(p);
  const auto theta = thermal_angles(st, modes);
  const auto [A, B, K] = squeeze_coeffs(st);
  const auto k = static_cast<std::size_t>(mode);
  const double w = modes.at(k).omega;
  const double g = modes[k].coupling;
  const double wq = conv.appendix_c_omega ? 1.0 : w;

  const Eigen::MatrixXcd a = ops::boson(OpLabel::Annihilate, n_max);
  const Eigen::MatrixXcd ad = ops::boson(OpLabel::Create, n_max);
  const Eigen::MatrixXcd n = ops::boson(OpLabel::Number, n_max);
  const Eigen::MatrixXcd a2 = a * a;
  const Eigen::MatrixXcd ad2 = ad * ad;

  ModeBlocks out;
  out.h_a = A * w * n + wq * B * ad2 + wq * std::conj(B) * a2;
  out.g_a = g * std::cosh(theta[k]) * (K * ad + std::conj(K) * a);
  const cplx b_create = conv.appendix_c_sign ? wq * std::conj(B) : -wq * std::conj(B);
  out.h_b = -A * w * n - wq * B * a2 + b_create * ad2;
  out.g_b = g * std::sinh(theta[k]) * (K * a + std::conj(K) * ad);
  return out;
}

TfdMpo::TfdMpo(ChainLayout layout, std::vector<MpoSite> sites) : layout_(std::move(layout)), sites_(std::move(sites)) {
  if (static_cast<int>(sites_.size()) != layout_.size()) throw std::invalid_argument("MPO does not match layout");
  for (std::size_t i = 0; i + 1 < sites_.size(); ++i) {
    if (sites_[i].cols != sites_[i + 1].rows) throw std::invalid_argument("MPO bond dimensions do not chain");
  }
  if (sites_.front().rows != 1 || sites_.back().cols != 1) throw std::invalid_argument("MPO boundaries must be 1");
}

SparseMatrix TfdMpo::to_sparse() const {
  if (layout_.hilbert_dim() > (1ULL << 20)) throw std::invalid_argument("chain too large to contract the MPO");
  const auto& first = sites_.front();
  std::vector<SparseMatrix> v(static_cast<std::size_t>(first.cols));
  for (int b = 0; b < first.cols; ++b) {
    const auto* blk = first.at(0, b);
    v[static_cast<std::size_t>(b)] = blk ? blk->op : SparseMatrix(first.dim, first.dim);
  }
  Eigen::Index prefix_dim = first.dim;
  for (std::size_t i = 1; i < sites_.size(); ++i) {
    const auto& w = sites_[i];
    std::vector<SparseMatrix> next(static_cast<std::size_t>(w.cols));
    for (int c = 0; c < w.cols; ++c) {
      SparseMatrix acc(prefix_dim * w.dim, prefix_dim * w.dim);
      for (int b = 0; b < w.rows; ++b) {
        const auto* blk = w.at(b, c);
        if (!blk || v[static_cast<std::size_t>(b)].nonZeros() == 0) continue;
        SparseMatrix kp = Eigen::kroneckerProduct(v[static_cast<std::size_t>(b)], blk->op);
        acc += kp;
      }
      next[static_cast<std::size_t>(c)] = std::move(acc);
    }
    v = std::move(next);
    prefix_dim *= w.dim;
  }
  v.front().makeCompressed();
  return v.front();
}

Eigen::MatrixXcd TfdMpo::to_dense() const {
  if (layout_.hilbert_dim() > 8192) throw std::invalid_argument("chain too large for a dense MPO contraction");
  return Eigen::MatrixXcd(to_sparse());
}

TfdMpo build_mpo(const ModelParams& p, const SqueezeThermal& st, const ChainLayout& layout,
                 const NumericsConfig& cfg) {
  if (layout.num_modes() != p.num_modes()) throw std::invalid_argument("layout and model disagree on M");
  if (!layout.has_fictitious() && !st.beta().is_infinite()) {
    throw std::invalid_argument("fictitious modes can only be dropped at zero temperature");
  }
  const int n = layout.size();
  std::vector<MpoSite> sites;
  sites.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto& spec = layout.site(i);
    auto w = full_w(p, st, spec, cfg.convention);
    MpoSite site;
    site.dim = spec.dim;
    const int row_lo = (i == 0) ? 2 : 0;
    const int row_hi = 3;
    const int col_hi = (i == n - 1) ? 1 : 3;
    site.rows = row_hi - row_lo;
    site.cols = col_hi;
    for (int a = row_lo; a < row_hi; ++a) {
      for (int b = 0; b < col_hi; ++b) site.blocks.push_back(std::move(w[static_cast<std::size_t>(a * 3 + b)]));
    }
    sites.push_back(std::move(site));
  }
  TfdMpo mpo(layout, std::move(sites));

  if (p.num_modes() <= 2 && layout.n_max() <= 4) {
    const SparseMatrix contracted = mpo.to_sparse();
    const SparseMatrix assembled = assemble_sparse(hamiltonian_terms(p, st, cfg.convention), layout);
    const double diff = Eigen::MatrixXcd(contracted - assembled).cwiseAbs().maxCoeff();
    if (diff > 1e-12) throw std::logic_error("MPO contraction disagrees with the term-list assembly");
    if (cfg.check_hermiticity) {
      const SparseMatrix adj = contracted.adjoint();
      const double herm = Eigen::MatrixXcd(contracted - adj).cwiseAbs().maxCoeff();
      if (herm > 1e-12) throw HermiticityError("assembled Hamiltonian is not Hermitian");
    }
  }
  return mpo;
}

}  // namespace mqrm::tn
