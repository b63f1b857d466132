#include "mqrm/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mqrm {

namespace {

Factor on(SiteKind kind, int mode, std::initializer_list<OpLabel> ops) {
  return {{kind, mode}, std::vector<OpLabel>(ops)};
}

constexpr auto kA = SiteKind::PhysicalBoson;
constexpr auto kB = SiteKind::FictitiousBoson;

}  // namespace

HamiltonianTerms hamiltonian_terms(const ModelParams& p, const SqueezeThermal& st,
                                   const QuadraticConvention& conv) {
  const auto modes = build_mode_table(p);
  const auto theta = thermal_angles(st, modes);
  const auto [A, B, K] = squeeze_coeffs(st);
  using L = OpLabel;

  HamiltonianTerms h;
  auto& t = h.terms;
  t.push_back({0.5 * p.delta(), {on(SiteKind::Spin, -1, {L::SigmaZ})}, "spin"});

  for (int m = 0; m < p.num_modes(); ++m) {
    const double w = modes[static_cast<std::size_t>(m)].omega;
    const double gm = modes[static_cast<std::size_t>(m)].coupling;
    const double ch = std::cosh(theta[static_cast<std::size_t>(m)]);
    const double sh = std::sinh(theta[static_cast<std::size_t>(m)]);
    const double wq = conv.appendix_c_omega ? 1.0 : w;

    t.push_back({A * w, {on(kA, m, {L::Create, L::Annihilate})}, "a_number"});
    t.push_back({wq * B, {on(kA, m, {L::Create, L::Create})}, "a_pair_create"});
    t.push_back({wq * std::conj(B), {on(kA, m, {L::Annihilate, L::Annihilate})}, "a_pair_annihilate"});

    t.push_back({-A * w, {on(kB, m, {L::Create, L::Annihilate})}, "b_number"});
    t.push_back({-wq * B, {on(kB, m, {L::Annihilate, L::Annihilate})}, "b_pair_annihilate"});
    const cplx b_create = conv.appendix_c_sign ? wq * std::conj(B) : -wq * std::conj(B);
    t.push_back({b_create, {on(kB, m, {L::Create, L::Create})}, "b_pair_create"});

    const auto sx = on(SiteKind::Spin, -1, {L::SigmaX});
    t.push_back({gm * K * ch, {on(kA, m, {L::Create}), sx}, "a_couple_create"});
    t.push_back({gm * std::conj(K) * ch, {on(kA, m, {L::Annihilate}), sx}, "a_couple_annihilate"});
    t.push_back({gm * K * sh, {on(kB, m, {L::Annihilate}), sx}, "b_couple_annihilate"});
    t.push_back({gm * std::conj(K) * sh, {on(kB, m, {L::Create}), sx}, "b_couple_create"});
  }
  return h;
}

Eigen::MatrixXcd factor_matrix(const Factor& f, int n_max) {
  Eigen::MatrixXcd m;
  for (const OpLabel op : f.ops) {
    Eigen::MatrixXcd local = f.site.kind == SiteKind::Spin ? ops::spin(op) : ops::boson(op, n_max);
    m = m.size() == 0 ? local : Eigen::MatrixXcd(m * local);
  }
  if (m.size() == 0) {
    m = f.site.kind == SiteKind::Spin ? ops::spin(OpLabel::Identity) : ops::boson(OpLabel::Identity, n_max);
  }
  return m;
}

SparseMatrix embed_product(const tn::ChainLayout& layout, std::span<const SiteOperator> factors) {
  const std::uint64_t dim64 = layout.hilbert_dim();
  if (dim64 > (1ULL << 26)) throw std::invalid_argument("Hilbert space too large for sparse assembly");
  const auto dim = static_cast<Eigen::Index>(dim64);
  const int n = layout.size();

  // Column-wise nonzeros of each local operator.
  struct Entry {
    int row;
    cplx value;
  };
  std::vector<const Eigen::MatrixXcd*> op_at(static_cast<std::size_t>(n), nullptr);
  std::vector<Eigen::MatrixXcd> merged;
  merged.reserve(factors.size());
  for (const auto& f : factors) {
    if (f.site < 0 || f.site >= n) throw std::out_of_range("site index out of range");
    const int d = layout.site(f.site).dim;
    if (f.op.rows() != d || f.op.cols() != d) throw std::invalid_argument("operator does not match site dimension");
    auto& slot = op_at[static_cast<std::size_t>(f.site)];
    if (slot) {
      merged.push_back((*slot) * f.op);
    } else {
      merged.push_back(f.op);
    }
    slot = &merged.back();
  }
  std::vector<std::vector<std::vector<Entry>>> cols(static_cast<std::size_t>(n));
  std::vector<int> active;
  for (int s = 0; s < n; ++s) {
    const auto* op = op_at[static_cast<std::size_t>(s)];
    if (!op) continue;
    active.push_back(s);
    auto& c = cols[static_cast<std::size_t>(s)];
    c.resize(static_cast<std::size_t>(op->cols()));
    for (Eigen::Index j = 0; j < op->cols(); ++j) {
      for (Eigen::Index i = 0; i < op->rows(); ++i) {
        if ((*op)(i, j) != cplx(0.0)) c[static_cast<std::size_t>(j)].push_back({static_cast<int>(i), (*op)(i, j)});
      }
    }
  }

  std::vector<Eigen::Index> stride(static_cast<std::size_t>(n), 1);
  for (int s = n - 2; s >= 0; --s) {
    stride[static_cast<std::size_t>(s)] = stride[static_cast<std::size_t>(s + 1)] * layout.site(s + 1).dim;
  }

  std::vector<Eigen::Triplet<cplx>> triplets;
  std::vector<int> digit(active.size());
  for (Eigen::Index col = 0; col < dim; ++col) {
    Eigen::Index base = col;
    for (std::size_t k = 0; k < active.size(); ++k) {
      const auto s = static_cast<std::size_t>(active[k]);
      digit[k] = static_cast<int>((col / stride[s]) % layout.site(active[k]).dim);
      base -= digit[k] * stride[s];
    }
    // Cartesian product over the active sites.
    std::vector<std::size_t> pick(active.size(), 0);
    while (true) {
      bool empty = false;
      Eigen::Index row = base;
      cplx value = 1.0;
      for (std::size_t k = 0; k < active.size(); ++k) {
        const auto& list = cols[static_cast<std::size_t>(active[k])][static_cast<std::size_t>(digit[k])];
        if (list.empty()) {
          empty = true;
          break;
        }
        row += list[pick[k]].row * stride[static_cast<std::size_t>(active[k])];
        value *= list[pick[k]].value;
      }
      if (empty) break;
      triplets.emplace_back(row, col, value);
      std::size_t k = 0;
      for (; k < active.size(); ++k) {
        const auto& list = cols[static_cast<std::size_t>(active[k])][static_cast<std::size_t>(digit[k])];
        if (++pick[k] < list.size()) break;
        pick[k] = 0;
      }
      if (k == active.size()) break;
    }
  }
  SparseMatrix out(dim, dim);
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

SparseMatrix assemble_sparse(const HamiltonianTerms& h, const tn::ChainLayout& layout) {
  const auto dim = static_cast<Eigen::Index>(layout.hilbert_dim());
  SparseMatrix total(dim, dim);
  for (const auto& term : h.terms) {
    if (term.coeff == cplx(0.0)) continue;
    std::vector<SiteOperator> factors;
    bool touches_missing = false;
    bool touches_present = false;
    for (const auto& f : term.factors) {
      int site = -1;
      switch (f.site.kind) {
        case SiteKind::Spin: site = layout.spin_index(); break;
        case SiteKind::PhysicalBoson: site = layout.physical_index(f.site.mode); break;
        case SiteKind::FictitiousBoson: site = layout.fictitious_index(f.site.mode); break;
      }
      if (site < 0) {
        touches_missing = true;
        continue;
      }
      touches_present = true;
      factors.push_back({site, factor_matrix(f, layout.site(site).n_max())});
    }
    if (touches_missing) {
      if (touches_present) {
        throw std::invalid_argument("term '" + term.tag + "' couples a dropped fictitious mode to the chain");
      }
      continue;
    }
    total += term.coeff * embed_product(layout, factors);
  }
  total.makeCompressed();
  return total;
}

Eigen::MatrixXcd assemble_dense(const HamiltonianTerms& h, const tn::ChainLayout& layout) {
  if (layout.hilbert_dim() > 8192) throw std::invalid_argument("Hilbert space too large for dense assembly");
  return Eigen::MatrixXcd(assemble_sparse(h, layout));
}

}  // namespace mqrm
