#pragma once

// Matrix-product state on a chain layout. Site i is stored as a dl x (d * dr)
// matrix whose s-th column block (columns s*dr .. s*dr+dr-1) is A[s].

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "mqrm/tn/layout.hpp"

namespace mqrm::tn {

/// Stack the blocks of a dl x (d*dr) site tensor vertically: (d*dl) x dr,
/// row s*dl + l.
Eigen::MatrixXcd to_left_grouped(const Eigen::MatrixXcd& t, int d);
/// Inverse of to_left_grouped.
Eigen::MatrixXcd to_right_grouped(const Eigen::MatrixXcd& m, int d);

class TfdMps {
 public:
  /// |up> on the spin and the Fock vacuum on every boson site; all bonds 1.
  static TfdMps product_vacuum(const ChainLayout& layout);

  const ChainLayout& layout() const { return layout_; }
  int size() const { return layout_.size(); }
  int dim(int i) const { return layout_.site(i).dim; }

  Eigen::MatrixXcd& tensor(int i) { return tensors_.at(static_cast<std::size_t>(i)); }
  const Eigen::MatrixXcd& tensor(int i) const { return tensors_.at(static_cast<std::size_t>(i)); }

  int bond_left(int i) const { return static_cast<int>(tensor(i).rows()); }
  int bond_right(int i) const { return static_cast<int>(tensor(i).cols()) / dim(i); }
  /// size()-1 inner bond dimensions.
  std::vector<int> bond_dims() const;
  int max_bond() const;

  /// Orthogonality center, or -1 when the gauge is unknown.
  int center() const { return center_; }
  void set_center(int c) { center_ = c; }

  /// QR / LQ sweeps so that every site left of c is left-orthonormal and
  /// every site right of c is right-orthonormal.
  void canonicalize(int c);

  /// Grows every bond to min(d_max, largest useful dimension) with
  /// zero-weight orthonormal directions, lowest local index first. The
  /// state is unchanged; the result has its center on the last site.
  void pad_bonds(int d_max);

  double norm_squared() const;
  void normalize();

  /// Coefficient vector; site 0 is the most significant digit.
  Eigen::VectorXcd to_dense() const;

  std::uint64_t parameter_count() const;

 private:
  explicit TfdMps(ChainLayout layout) : layout_(std::move(layout)) {}
  ChainLayout layout_;
  std::vector<Eigen::MatrixXcd> tensors_;
  int center_ = -1;

  friend TfdMps make_mps(ChainLayout layout, std::vector<Eigen::MatrixXcd> tensors, int center);
};

/// Raw constructor used by deserialization and tests; checks shapes.
TfdMps make_mps(ChainLayout layout, std::vector<Eigen::MatrixXcd> tensors, int center = -1);

inline TfdMps initial_mps(const ChainLayout& layout) { return TfdMps::product_vacuum(layout); }

}  // namespace mqrm::tn
