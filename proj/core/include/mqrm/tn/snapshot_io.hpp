#pragma once

// Binary snapshot container, all integers and floats little-endian:
//
//   char[8]  magic "MQRMSNAP"
//   u32      format version (1)
//   f64      time
//   u32      num_modes
//   u32      n_max
//   u32      has_fictitious (0 or 1)
//   i32      orthogonality center (-1 unknown)
//   u32      num_sites
//   per site:
//     u32    kind (0 spin, 1 physical boson, 2 fictitious boson)
//     i32    mode (-1 for the spin)
//     u32    local dimension d
//     u32    rows (left bond), u32 cols (d * right bond)
//     f64[2 * rows * cols]  (re, im) pairs, column-major

#include <cstdint>
#include <iosfwd>
#include <string>

#include "mqrm/tn/mps.hpp"

namespace mqrm::tn {

inline constexpr char kSnapshotMagic[8] = {'M', 'Q', 'R', 'M', 'S', 'N', 'A', 'P'};
inline constexpr std::uint32_t kSnapshotVersion = 1;

struct StoredSnapshot {
  double time;
  TfdMps state;
};

void write_snapshot(std::ostream& os, double time, const TfdMps& state);
/// Throws std::runtime_error on a bad magic, unknown version or inconsistent shapes.
StoredSnapshot read_snapshot(std::istream& is);

void save_snapshot(const std::string& path, double time, const TfdMps& state);
StoredSnapshot load_snapshot(const std::string& path);

}  // namespace mqrm::tn
