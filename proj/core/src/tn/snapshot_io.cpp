#include "mqrm/tn/snapshot_io.hpp"

#include <array>
#include <bit>
#include <complex>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace mqrm::tn {

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
  std::array<char, 4> b{};
  for (int k = 0; k < 4; ++k) b[static_cast<std::size_t>(k)] = static_cast<char>((v >> (8 * k)) & 0xFFu);
  os.write(b.data(), 4);
}

void put_u64(std::ostream& os, std::uint64_t v) {
  std::array<char, 8> b{};
  for (int k = 0; k < 8; ++k) b[static_cast<std::size_t>(k)] = static_cast<char>((v >> (8 * k)) & 0xFFu);
  os.write(b.data(), 8);
}

void put_i32(std::ostream& os, std::int32_t v) { put_u32(os, static_cast<std::uint32_t>(v)); }
void put_f64(std::ostream& os, double v) { put_u64(os, std::bit_cast<std::uint64_t>(v)); }

std::uint32_t get_u32(std::istream& is) {
  std::array<unsigned char, 4> b{};
  if (!is.read(reinterpret_cast<char*>(b.data()), 4)) throw std::runtime_error("snapshot truncated");
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(b[static_cast<std::size_t>(k)]) << (8 * k);
  return v;
}

std::uint64_t get_u64(std::istream& is) {
  std::array<unsigned char, 8> b{};
  if (!is.read(reinterpret_cast<char*>(b.data()), 8)) throw std::runtime_error("snapshot truncated");
  std::uint64_t v = 0;
  for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(b[static_cast<std::size_t>(k)]) << (8 * k);
  return v;
}

std::int32_t get_i32(std::istream& is) { return static_cast<std::int32_t>(get_u32(is)); }
double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }

std::uint32_t kind_code(SiteKind k) {
  switch (k) {
    case SiteKind::Spin:
      return 0;
    case SiteKind::PhysicalBoson:
      return 1;
    case SiteKind::FictitiousBoson:
      return 2;
  }
  return 0;
}

}  // namespace

void write_snapshot(std::ostream& os, double time, const TfdMps& state) {
  const auto& layout = state.layout();
  os.write(kSnapshotMagic, sizeof(kSnapshotMagic));
  put_u32(os, kSnapshotVersion);
  put_f64(os, time);
  put_u32(os, static_cast<std::uint32_t>(layout.num_modes()));
  put_u32(os, static_cast<std::uint32_t>(layout.n_max()));
  put_u32(os, layout.has_fictitious() ? 1u : 0u);
  put_i32(os, state.center());
  put_u32(os, static_cast<std::uint32_t>(state.size()));
  for (int i = 0; i < state.size(); ++i) {
    const auto& site = layout.site(i);
    const auto& t = state.tensor(i);
    put_u32(os, kind_code(site.kind));
    put_i32(os, site.mode);
    put_u32(os, static_cast<std::uint32_t>(site.dim));
    put_u32(os, static_cast<std::uint32_t>(t.rows()));
    put_u32(os, static_cast<std::uint32_t>(t.cols()));
    for (Eigen::Index c = 0; c < t.cols(); ++c) {
      for (Eigen::Index r = 0; r < t.rows(); ++r) {
        put_f64(os, t(r, c).real());
        put_f64(os, t(r, c).imag());
      }
    }
  }
  if (!os) throw std::runtime_error("failed to write snapshot");
}

StoredSnapshot read_snapshot(std::istream& is) {
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, kSnapshotMagic, 8) != 0) {
    throw std::runtime_error("not a snapshot file (bad magic)");
  }
  const auto version = get_u32(is);
  if (version != kSnapshotVersion) throw std::runtime_error("unsupported snapshot version " + std::to_string(version));
  const double time = get_f64(is);
  const auto num_modes = static_cast<int>(get_u32(is));
  const auto n_max = static_cast<int>(get_u32(is));
  const bool fict = get_u32(is) != 0;
  const int center = get_i32(is);
  const auto num_sites = static_cast<int>(get_u32(is));
  const ChainLayout layout = fict ? ChainLayout::doubled(num_modes, n_max) : ChainLayout::physical_only(num_modes, n_max);
  if (num_sites != layout.size()) throw std::runtime_error("snapshot site count does not match its layout");
  std::vector<Eigen::MatrixXcd> tensors;
  for (int i = 0; i < num_sites; ++i) {
    const auto& site = layout.site(i);
    const auto kind = get_u32(is);
    const auto mode = get_i32(is);
    const auto dim = static_cast<int>(get_u32(is));
    if (kind != kind_code(site.kind) || mode != site.mode || dim != site.dim) {
      throw std::runtime_error("snapshot site header does not match its layout");
    }
    const auto rows = get_u32(is);
    const auto cols = get_u32(is);
    if (rows == 0 || cols == 0 || rows > (1u << 16) || cols > (1u << 24)) throw std::runtime_error("implausible tensor shape");
    Eigen::MatrixXcd t(rows, cols);
    for (Eigen::Index c = 0; c < t.cols(); ++c) {
      for (Eigen::Index r = 0; r < t.rows(); ++r) {
        const double re = get_f64(is);
        const double im = get_f64(is);
        t(r, c) = std::complex<double>(re, im);
      }
    }
    tensors.push_back(std::move(t));
  }
  try {
    return {time, make_mps(layout, std::move(tensors), center)};
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("inconsistent snapshot: ") + e.what());
  }
}

void save_snapshot(const std::string& path, double time, const TfdMps& state) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  write_snapshot(os, time, state);
}

StoredSnapshot load_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_snapshot(is);
}

}  // namespace mqrm::tn
