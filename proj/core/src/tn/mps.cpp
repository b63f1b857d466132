#include "mqrm/tn/mps.hpp"

#include <algorithm>
#include <stdexcept>

namespace mqrm::tn {

Eigen::MatrixXcd to_left_grouped(const Eigen::MatrixXcd& t, int d) {
  const Eigen::Index dl = t.rows();
  const Eigen::Index dr = t.cols() / d;
  Eigen::MatrixXcd m(dl * d, dr);
  for (int s = 0; s < d; ++s) m.middleRows(s * dl, dl) = t.middleCols(s * dr, dr);
  return m;
}

Eigen::MatrixXcd to_right_grouped(const Eigen::MatrixXcd& m, int d) {
  const Eigen::Index dl = m.rows() / d;
  const Eigen::Index dr = m.cols();
  Eigen::MatrixXcd t(dl, dr * d);
  for (int s = 0; s < d; ++s) t.middleCols(s * dr, dr) = m.middleRows(s * dl, dl);
  return t;
}

TfdMps TfdMps::product_vacuum(const ChainLayout& layout) {
  TfdMps mps(layout);
  for (const auto& site : layout.sites()) {
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(1, site.dim);
    t(0, 0) = 1.0;  // spin up is index 0, Fock vacuum is index 0
    mps.tensors_.push_back(std::move(t));
  }
  mps.center_ = 0;
  return mps;
}

TfdMps make_mps(ChainLayout layout, std::vector<Eigen::MatrixXcd> tensors, int center) {
  if (static_cast<int>(tensors.size()) != layout.size()) throw std::invalid_argument("tensor count != chain length");
  Eigen::Index prev = 1;
  for (int i = 0; i < layout.size(); ++i) {
    const auto& t = tensors[static_cast<std::size_t>(i)];
    const int d = layout.site(i).dim;
    if (t.rows() != prev || t.cols() % d != 0 || t.cols() == 0) {
      throw std::invalid_argument("site tensor shape does not chain");
    }
    prev = t.cols() / d;
  }
  if (prev != 1) throw std::invalid_argument("right boundary bond must be 1");
  if (center < -1 || center >= layout.size()) throw std::invalid_argument("center out of range");
  TfdMps mps(std::move(layout));
  mps.tensors_ = std::move(tensors);
  mps.center_ = center;
  return mps;
}

std::vector<int> TfdMps::bond_dims() const {
  std::vector<int> out;
  for (int i = 0; i + 1 < size(); ++i) out.push_back(bond_right(i));
  return out;
}

int TfdMps::max_bond() const {
  int m = 1;
  for (int b : bond_dims()) m = std::max(m, b);
  return m;
}

void TfdMps::canonicalize(int c) {
  if (c < 0 || c >= size()) throw std::invalid_argument("center out of range");
  for (int i = 0; i < c; ++i) {
    const int d = dim(i);
    Eigen::MatrixXcd m = to_left_grouped(tensor(i), d);
    const Eigen::Index k = std::min(m.rows(), m.cols());
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(m.rows(), k);
    Eigen::MatrixXcd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    tensor(i) = to_right_grouped(q, d);
    tensor(i + 1) = r * tensor(i + 1);
  }
  for (int i = size() - 1; i > c; --i) {
    const Eigen::MatrixXcd& t = tensor(i);
    const Eigen::Index k = std::min(t.rows(), t.cols());
    Eigen::MatrixXcd th = t.adjoint();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(th);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(th.rows(), k);
    Eigen::MatrixXcd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    tensor(i) = q.adjoint();
    const int dp = dim(i - 1);
    Eigen::MatrixXcd prev = to_left_grouped(tensor(i - 1), dp) * r.adjoint();
    tensor(i - 1) = to_right_grouped(prev, dp);
  }
  center_ = c;
}

void TfdMps::pad_bonds(int d_max) {
  canonicalize(size() - 1);
  const auto target = layout_.max_bond_dims(d_max);
  for (int i = 0; i + 1 < size(); ++i) {
    const int want = target[static_cast<std::size_t>(i)];
    const int have = bond_right(i);
    if (have >= want) continue;
    const int d = dim(i);
    Eigen::MatrixXcd q = to_left_grouped(tensor(i), d);
    const Eigen::Index rows = q.rows();
    Eigen::MatrixXcd grown(rows, want);
    grown.leftCols(have) = q;
    int filled = have;
    for (Eigen::Index k = 0; k < rows && filled < want; ++k) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Unit(rows, k);
      for (int pass = 0; pass < 2; ++pass) {
        v -= grown.leftCols(filled) * (grown.leftCols(filled).adjoint() * v);
      }
      const double n = v.norm();
      if (n < 1e-6) continue;
      grown.col(filled++) = v / n;
    }
    if (filled < want) throw std::logic_error("bond padding ran out of directions");
    tensor(i) = to_right_grouped(grown, d);
    Eigen::MatrixXcd& next = tensor(i + 1);
    Eigen::MatrixXcd ext = Eigen::MatrixXcd::Zero(want, next.cols());
    ext.topRows(have) = next;
    next = std::move(ext);
  }
  center_ = size() - 1;
}

double TfdMps::norm_squared() const {
  Eigen::MatrixXcd e = Eigen::MatrixXcd::Identity(1, 1);
  for (int i = 0; i < size(); ++i) {
    const int d = dim(i);
    const Eigen::MatrixXcd m = to_left_grouped(e * tensor(i), d);
    const Eigen::MatrixXcd a = to_left_grouped(tensor(i), d);
    e = a.adjoint() * m;
  }
  return e(0, 0).real();
}

void TfdMps::normalize() {
  const double n = std::sqrt(norm_squared());
  if (!(n > 0.0)) throw std::runtime_error("cannot normalize a zero state");
  const int c = center_ >= 0 ? center_ : 0;
  tensor(c) /= n;
}

Eigen::VectorXcd TfdMps::to_dense() const {
  if (layout_.hilbert_dim() > (1ULL << 24)) throw std::invalid_argument("chain too large for a dense vector");
  Eigen::MatrixXcd v = tensor(0);  // 1 x (d*dr)
  v = to_left_grouped(v, dim(0));  // d x dr
  for (int i = 1; i < size(); ++i) {
    const int d = dim(i);
    const Eigen::MatrixXcd prod = v * tensor(i);  // prefix x (d*dr)
    const Eigen::Index dr = bond_right(i);
    Eigen::MatrixXcd next(prod.rows() * d, dr);
    for (Eigen::Index p = 0; p < prod.rows(); ++p) {
      for (int s = 0; s < d; ++s) next.row(p * d + s) = prod.row(p).segment(s * dr, dr);
    }
    v = std::move(next);
  }
  return v.col(0);
}

std::uint64_t TfdMps::parameter_count() const {
  std::uint64_t n = 0;
  for (const auto& t : tensors_) n += static_cast<std::uint64_t>(t.size());
  return n;
}

}  // namespace mqrm::tn
