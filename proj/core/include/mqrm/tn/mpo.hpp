#pragma once

// Bond-dimension-3 MPO of the doubled Hamiltonian. Lower-triangular blocks
//
//   W_b = [ I     0     0 ]   W_s = [ I       0   0 ]   W_a = [ I    0  0 ]
//         [ 0     I     0 ]         [ sx      0   0 ]         [ G_a  I  0 ]
//         [ H_b   G_b   I ]         [ D sz/2  sx  I ]         [ H_a  0  I ]
//
// contracted as (prod W_b) W_s (prod W_a); the leftmost site keeps its
// bottom row and the rightmost site its first column. The spin block has a
// zero at (1,1) so that G_b only ever multiplies sx.

#include <optional>
#include <stdexcept>
#include <vector>

#include "mqrm/hamiltonian.hpp"
#include "mqrm/tn/config.hpp"
#include "mqrm/tn/layout.hpp"

namespace mqrm::tn {

struct MpoBlock {
  SparseMatrix op;
  bool identity = false;
};

struct MpoSite {
  int rows = 0;
  int cols = 0;
  int dim = 0;
  std::vector<std::optional<MpoBlock>> blocks;  // row-major rows x cols

  const MpoBlock* at(int a, int b) const {
    const auto& blk = blocks[static_cast<std::size_t>(a * cols + b)];
    return blk ? &*blk : nullptr;
  }
};

class HermiticityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TfdMpo {
 public:
  TfdMpo(ChainLayout layout, std::vector<MpoSite> sites);

  const ChainLayout& layout() const { return layout_; }
  const MpoSite& site(int i) const { return sites_.at(static_cast<std::size_t>(i)); }
  int size() const { return static_cast<int>(sites_.size()); }

  /// Full contraction; only sensible for small chains.
  SparseMatrix to_sparse() const;
  Eigen::MatrixXcd to_dense() const;

 private:
  ChainLayout layout_;
  std::vector<MpoSite> sites_;
};

/// On-site blocks for mode m, in the basis of Fock cutoff n_max.
struct ModeBlocks {
  Eigen::MatrixXcd h_a;  // A w a^+a + w (B a^+2 + B^* a^2)
  Eigen::MatrixXcd g_a;  // g K cosh(th) a^+ + h.c.
  Eigen::MatrixXcd h_b;  // -A w b^+b - w (B b^2 + B^* b^+2)
  Eigen::MatrixXcd g_b;  // g K sinh(th) b + h.c.
};

ModeBlocks mode_blocks(const ModelParams& p, const SqueezeThermal& st, int mode, int n_max,
                       const QuadraticConvention& conv = {});

/// Builds the MPO. For M <= 2 and n_max <= 4 the contraction is compared
/// against the term-list assembly (throws std::logic_error beyond 1e-12) and,
/// when cfg.check_hermiticity is set, checked for Hermiticity (throws
/// HermiticityError).
TfdMpo build_mpo(const ModelParams& p, const SqueezeThermal& st, const ChainLayout& layout,
                 const NumericsConfig& cfg);

}  // namespace mqrm::tn
