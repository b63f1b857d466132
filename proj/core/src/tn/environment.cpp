#include "mqrm/tn/environment.hpp"

#include <stdexcept>

#include "mqrm/tn/mps.hpp"

namespace mqrm::tn {

LocalMpo prepare_local(const MpoSite& site) {
  LocalMpo out;
  out.rows = site.rows;
  out.cols = site.cols;
  out.dim = site.dim;
  for (int a = 0; a < site.rows; ++a) {
    for (int b = 0; b < site.cols; ++b) {
      const MpoBlock* blk = site.at(a, b);
      if (!blk) continue;
      LocalBlock lb{a, b, blk->identity, {}};
      if (!blk->identity) {
        for (int k = 0; k < blk->op.outerSize(); ++k) {
          for (SparseMatrix::InnerIterator it(blk->op, k); it; ++it) {
            if (it.value() != cplx(0.0)) {
              lb.entries.push_back({static_cast<int>(it.row()), static_cast<int>(it.col()), it.value()});
            }
          }
        }
        if (lb.entries.empty()) continue;
      }
      out.blocks.push_back(std::move(lb));
    }
  }
  return out;
}

std::vector<LocalMpo> prepare_local(const TfdMpo& mpo) {
  std::vector<LocalMpo> out;
  out.reserve(static_cast<std::size_t>(mpo.size()));
  for (int i = 0; i < mpo.size(); ++i) out.push_back(prepare_local(mpo.site(i)));
  return out;
}

Environment boundary_environment() { return {Eigen::MatrixXcd::Identity(1, 1)}; }

namespace {

Environment zeros(int n, Eigen::Index rows, Eigen::Index cols) {
  return Environment(static_cast<std::size_t>(n), Eigen::MatrixXcd::Zero(rows, cols));
}

// q[b] column blocks += W_ab(s,s') p[a] column blocks.
void mix_columns(const LocalMpo& w, const Environment& p, Environment& q, Eigen::Index width) {
  for (const auto& blk : w.blocks) {
    const auto& src = p[static_cast<std::size_t>(blk.a)];
    auto& dst = q[static_cast<std::size_t>(blk.b)];
    if (blk.identity) {
      dst += src;
      continue;
    }
    for (const auto& e : blk.entries) dst.middleCols(e.out * width, width) += e.w * src.middleCols(e.in * width, width);
  }
}

// q[a] row blocks += W_ab(s,s') p[b] row blocks.
void mix_rows_backward(const LocalMpo& w, const Environment& p, Environment& q, Eigen::Index height) {
  for (const auto& blk : w.blocks) {
    const auto& src = p[static_cast<std::size_t>(blk.b)];
    auto& dst = q[static_cast<std::size_t>(blk.a)];
    if (blk.identity) {
      dst += src;
      continue;
    }
    for (const auto& e : blk.entries) dst.middleRows(e.out * height, height) += e.w * src.middleRows(e.in * height, height);
  }
}

// q[b] row blocks += W_ab(s,s') p[a] row blocks.
void mix_rows(const LocalMpo& w, const Environment& p, Environment& q, Eigen::Index height) {
  for (const auto& blk : w.blocks) {
    const auto& src = p[static_cast<std::size_t>(blk.a)];
    auto& dst = q[static_cast<std::size_t>(blk.b)];
    if (blk.identity) {
      dst += src;
      continue;
    }
    for (const auto& e : blk.entries) dst.middleRows(e.out * height, height) += e.w * src.middleRows(e.in * height, height);
  }
}

}  // namespace

Environment update_left(const Environment& left, const Eigen::MatrixXcd& t, const LocalMpo& w) {
  if (static_cast<int>(left.size()) != w.rows) throw std::invalid_argument("left environment / MPO mismatch");
  const int d = w.dim;
  const Eigen::Index dr = t.cols() / d;
  Environment p(left.size());
  for (std::size_t a = 0; a < left.size(); ++a) p[a] = left[a] * t;
  Environment q = zeros(w.cols, left.front().rows(), t.cols());
  mix_columns(w, p, q, dr);
  const Eigen::MatrixXcd tl = to_left_grouped(t, d);
  Environment out(static_cast<std::size_t>(w.cols));
  for (int b = 0; b < w.cols; ++b) out[static_cast<std::size_t>(b)] = tl.adjoint() * to_left_grouped(q[static_cast<std::size_t>(b)], d);
  return out;
}

Environment update_right(const Environment& right, const Eigen::MatrixXcd& t, const LocalMpo& w) {
  if (static_cast<int>(right.size()) != w.cols) throw std::invalid_argument("right environment / MPO mismatch");
  const int d = w.dim;
  const Eigen::Index dl = t.rows();
  const Eigen::MatrixXcd tl = to_left_grouped(t, d);
  Environment p(right.size());
  for (std::size_t b = 0; b < right.size(); ++b) p[b] = tl * right[b];
  Environment q = zeros(w.rows, tl.rows(), right.front().cols());
  mix_rows_backward(w, p, q, dl);
  Environment out(static_cast<std::size_t>(w.rows));
  for (int a = 0; a < w.rows; ++a) out[static_cast<std::size_t>(a)] = to_right_grouped(q[static_cast<std::size_t>(a)], d) * t.adjoint();
  return out;
}

void apply_one_site(const Environment& left, const LocalMpo& w, const Environment& right, const Eigen::MatrixXcd& t,
                    Eigen::MatrixXcd& out) {
  const int d = w.dim;
  const Eigen::Index dr = t.cols() / d;
  Environment p(left.size());
  for (std::size_t a = 0; a < left.size(); ++a) p[a] = left[a] * t;
  Environment q = zeros(w.cols, left.front().rows(), t.cols());
  mix_columns(w, p, q, dr);
  out.setZero(left.front().rows(), right.front().cols() * d);
  const Eigen::Index dro = right.front().cols();
  for (int b = 0; b < w.cols; ++b) {
    const auto& qb = q[static_cast<std::size_t>(b)];
    const auto& rb = right[static_cast<std::size_t>(b)];
    for (int s = 0; s < d; ++s) out.middleCols(s * dro, dro).noalias() += qb.middleCols(s * dr, dr) * rb;
  }
}

void apply_bond(const Environment& left, const Environment& right, const Eigen::MatrixXcd& c, Eigen::MatrixXcd& out) {
  if (left.size() != right.size()) throw std::invalid_argument("bond environments mismatch");
  out.setZero(left.front().rows(), right.front().cols());
  for (std::size_t a = 0; a < left.size(); ++a) out.noalias() += left[a] * c * right[a];
}

void apply_two_site(const Environment& left, const LocalMpo& w1, const LocalMpo& w2, const Environment& right,
                    const Eigen::MatrixXcd& theta, Eigen::MatrixXcd& out) {
  const int d1 = w1.dim;
  const int d2 = w2.dim;
  const Eigen::Index dl = theta.rows() / d1;
  const Eigen::Index dr = theta.cols() / d2;
  const Eigen::Index dlo = left.front().rows();
  Environment p(left.size());
  for (std::size_t a = 0; a < left.size(); ++a) {
    p[a].resize(dlo * d1, theta.cols());
    for (int s = 0; s < d1; ++s) p[a].middleRows(s * dlo, dlo).noalias() = left[a] * theta.middleRows(s * dl, dl);
  }
  Environment q = zeros(w1.cols, dlo * d1, theta.cols());
  mix_rows(w1, p, q, dlo);
  Environment z = zeros(w2.cols, dlo * d1, theta.cols());
  mix_columns(w2, q, z, dr);
  const Eigen::Index dro = right.front().cols();
  out.setZero(dlo * d1, dro * d2);
  for (int c = 0; c < w2.cols; ++c) {
    const auto& zc = z[static_cast<std::size_t>(c)];
    const auto& rc = right[static_cast<std::size_t>(c)];
    for (int s = 0; s < d2; ++s) out.middleCols(s * dro, dro).noalias() += zc.middleCols(s * dr, dr) * rc;
  }
}

cplx mpo_expectation(const std::vector<LocalMpo>& mpo, const std::vector<Eigen::MatrixXcd>& tensors) {
  Environment env = boundary_environment();
  for (std::size_t i = 0; i < mpo.size(); ++i) env = update_left(env, tensors[i], mpo[i]);
  return env.front()(0, 0);
}

}  // namespace mqrm::tn
