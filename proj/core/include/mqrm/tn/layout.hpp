#pragma once

#include <cstdint>
#include <vector>

#include "mqrm/operators.hpp"

namespace mqrm::tn {

struct SiteSpec {
  SiteKind kind;
  int mode;  // -1 for the spin
  int dim;   // 2 for the spin, n_max + 1 for bosons

  int n_max() const { return dim - 1; }

  friend bool operator==(const SiteSpec&, const SiteSpec&) = default;
};

/// Site ordering of the doubled chain:
///   b_{M-1} ... b_1 b_0 | spin | a_0 a_1 ... a_{M-1}
/// Low modes sit next to the spin in both blocks. When the fictitious
/// modes are dropped the chain starts at the spin.
class ChainLayout {
 public:
  static ChainLayout doubled(int num_modes, int n_max);
  static ChainLayout physical_only(int num_modes, int n_max);

  int size() const { return static_cast<int>(sites_.size()); }
  int num_modes() const { return num_modes_; }
  bool has_fictitious() const { return has_fictitious_; }
  int n_max() const { return n_max_; }

  const SiteSpec& site(int i) const { return sites_.at(static_cast<std::size_t>(i)); }
  const std::vector<SiteSpec>& sites() const { return sites_; }

  int spin_index() const { return has_fictitious_ ? num_modes_ : 0; }
  int physical_index(int mode) const;
  /// -1 when the fictitious block is absent.
  int fictitious_index(int mode) const;

  /// Product of local dimensions, saturating at UINT64_MAX.
  std::uint64_t hilbert_dim() const;

  /// Largest bond dimension the exact state could need on each of the
  /// size()-1 bonds (capped at `cap`).
  std::vector<int> max_bond_dims(int cap) const;

  friend bool operator==(const ChainLayout&, const ChainLayout&) = default;

 private:
  ChainLayout() = default;
  std::vector<SiteSpec> sites_;
  int num_modes_ = 0;
  int n_max_ = 0;
  bool has_fictitious_ = true;
};

}  // namespace mqrm::tn
