#ifndef SEMIREL_CHECKPOINT_HPP
#define SEMIREL_CHECKPOINT_HPP

// Wave-function checkpoint, little-endian regardless of host:
//
//   uint32  dims
//   uint32  n[dims]
//   float64 L[dims]
//   float64 t
//   float64 (re, im) pairs, grid.size() of them, axis 0 slowest

#include "tdse.hpp"

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>

namespace semirel {

namespace detail {

inline void put_u32(std::ostream& os, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(b, 4);
}

inline void put_f64(std::ostream& os, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(b, 8);
}

inline std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) throw Error("checkpoint: truncated header");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

inline double get_f64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw Error("checkpoint: truncated data");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

}  // namespace detail

inline void write_checkpoint(std::ostream& os, const GridSpec& grid, const WaveState& psi) {
  if (psi.psi.size() != grid.size()) throw InvalidArgument("checkpoint: state does not match grid");
  detail::put_u32(os, static_cast<std::uint32_t>(grid.dims));
  for (int a = 0; a < grid.dims; ++a) detail::put_u32(os, static_cast<std::uint32_t>(grid.n[a]));
  for (int a = 0; a < grid.dims; ++a) detail::put_f64(os, grid.L[a]);
  detail::put_f64(os, psi.t);
  for (const auto& z : psi.psi) {
    detail::put_f64(os, z.real());
    detail::put_f64(os, z.imag());
  }
}

// Reads a checkpoint and fills `grid` from its header. The absorbed-norm
// bookkeeping is not part of the format and is reset to 1 - norm.
inline WaveState read_checkpoint(std::istream& is, GridSpec& grid) {
  GridSpec g;
  g.dims = static_cast<int>(detail::get_u32(is));
  if (g.dims != 1 && g.dims != 2) throw Error("checkpoint: bad dims");
  for (int a = 0; a < g.dims; ++a) g.n[a] = static_cast<int>(detail::get_u32(is));
  for (int a = 0; a < g.dims; ++a) g.L[a] = detail::get_f64(is);
  if (g.dims == 1) {
    g.n[1] = g.n[0];
    g.L[1] = g.L[0];
  }
  g.validate();
  WaveState psi;
  psi.t = detail::get_f64(is);
  psi.psi.resize(g.size());
  for (auto& z : psi.psi) {
    const double re = detail::get_f64(is);
    z = complex(re, detail::get_f64(is));
  }
  psi.norm = grid_norm2(g, psi.psi);
  psi.absorbed = std::max(0.0, 1.0 - psi.norm);
  grid = g;
  return psi;
}

}  // namespace semirel

#endif  // SEMIREL_CHECKPOINT_HPP
