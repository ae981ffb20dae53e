#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace lem {

struct Offset {
  int dx;
  int dy;
};

/// Geometric length of a grid offset under spacing (sx, sy). The single
/// source of truth for distances: the stencil table and the erosion kernel
/// both call this, so the values agree bit-for-bit.
inline double offset_length(int dx, int dy, double sx, double sy) {
  const double ox = dx * sx;
  const double oy = dy * sy;
  if (dy == 0) return std::abs(ox);
  if (dx == 0) return std::abs(oy);
  return std::sqrt(ox * ox + oy * oy);
}

/// Fixed neighbour stencil for a regular grid.
///
/// The offset order is part of the determinism contract: receiver
/// tie-breaking keeps the first neighbour that attains the maximum slope,
/// so reordering offsets changes outputs. The 8-connected order is frozen
/// as (-1,-1),(0,-1),(1,-1),(-1,0),(1,0),(-1,1),(0,1),(1,1); the
/// 4-connected order is the cardinal subsequence (0,-1),(-1,0),(1,0),(0,1).
struct Neighborhood {
  int connectivity = 8;                // also the maximum donor count Dmax
  std::array<Offset, 8> offsets{};
  std::array<double, 8> distances{};  // geometric length of each offset
  double dx = 1.0;                    // cell spacing
  double dy = 1.0;

  int max_degree() const { return connectivity; }

  static Neighborhood d4(double dx = 1.0, double dy = 1.0);
  static Neighborhood d8(double dx = 1.0, double dy = 1.0);

  /// connectivity must be 4 or 8. Hexagonal grids are declared in the
  /// interface but not implemented; asking for 6 raises ConfigError.
  static Neighborhood make(int connectivity, double dx = 1.0, double dy = 1.0);
};

}  // namespace lem
