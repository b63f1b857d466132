#include "mqrm/tn/layout.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace mqrm::tn {

namespace {

void check_args(int num_modes, int n_max) {
  if (num_modes < 1) throw std::invalid_argument("layout needs at least one mode");
  if (n_max < 1) throw std::invalid_argument("Fock cutoff n_max must be >= 1");
}

}  // namespace

ChainLayout ChainLayout::doubled(int num_modes, int n_max) {
  check_args(num_modes, n_max);
  ChainLayout layout;
  layout.num_modes_ = num_modes;
  layout.n_max_ = n_max;
  layout.has_fictitious_ = true;
  for (int m = num_modes - 1; m >= 0; --m) layout.sites_.push_back({SiteKind::FictitiousBoson, m, n_max + 1});
  layout.sites_.push_back({SiteKind::Spin, -1, 2});
  for (int m = 0; m < num_modes; ++m) layout.sites_.push_back({SiteKind::PhysicalBoson, m, n_max + 1});
  return layout;
}

ChainLayout ChainLayout::physical_only(int num_modes, int n_max) {
  check_args(num_modes, n_max);
  ChainLayout layout;
  layout.num_modes_ = num_modes;
  layout.n_max_ = n_max;
  layout.has_fictitious_ = false;
  layout.sites_.push_back({SiteKind::Spin, -1, 2});
  for (int m = 0; m < num_modes; ++m) layout.sites_.push_back({SiteKind::PhysicalBoson, m, n_max + 1});
  return layout;
}

int ChainLayout::physical_index(int mode) const {
  if (mode < 0 || mode >= num_modes_) throw std::out_of_range("mode index out of range");
  return spin_index() + 1 + mode;
}

int ChainLayout::fictitious_index(int mode) const {
  if (mode < 0 || mode >= num_modes_) throw std::out_of_range("mode index out of range");
  if (!has_fictitious_) return -1;
  return num_modes_ - 1 - mode;
}

std::uint64_t ChainLayout::hilbert_dim() const {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t dim = 1;
  for (const auto& s : sites_) {
    const auto d = static_cast<std::uint64_t>(s.dim);
    if (dim > kMax / d) return kMax;
    dim *= d;
  }
  return dim;
}

std::vector<int> ChainLayout::max_bond_dims(int cap) const {
  const int n = size();
  std::vector<int> dims(static_cast<std::size_t>(std::max(n - 1, 0)), 1);
  auto capped_mul = [cap](long long a, long long b) { return std::min<long long>(a * b, cap); };
  std::vector<long long> left(static_cast<std::size_t>(n), 1), right(static_cast<std::size_t>(n), 1);
  long long acc = 1;
  for (int i = 0; i < n - 1; ++i) {
    acc = capped_mul(acc, sites_[static_cast<std::size_t>(i)].dim);
    left[static_cast<std::size_t>(i)] = acc;
  }
  acc = 1;
  for (int i = n - 1; i >= 1; --i) {
    acc = capped_mul(acc, sites_[static_cast<std::size_t>(i)].dim);
    right[static_cast<std::size_t>(i - 1)] = acc;
  }
  for (int b = 0; b < n - 1; ++b) {
    dims[static_cast<std::size_t>(b)] = static_cast<int>(
        std::min({left[static_cast<std::size_t>(b)], right[static_cast<std::size_t>(b)], static_cast<long long>(cap)}));
  }
  return dims;
}

}  // namespace mqrm::tn
