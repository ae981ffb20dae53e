#include "lem/neighborhood.hpp"

#include <cmath>

#include "lem/error.hpp"

namespace lem {

Neighborhood Neighborhood::d8(double dx, double dy) {
  Neighborhood n;
  n.connectivity = 8;
  n.offsets = {{{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}}};
  n.dx = dx;
  n.dy = dy;
  for (int i = 0; i < 8; ++i)
    n.distances[i] = offset_length(n.offsets[i].dx, n.offsets[i].dy, dx, dy);
  return n;
}

Neighborhood Neighborhood::d4(double dx, double dy) {
  Neighborhood n;
  n.connectivity = 4;
  n.offsets = {{{0, -1}, {-1, 0}, {1, 0}, {0, 1}, {0, 0}, {0, 0}, {0, 0}, {0, 0}}};
  n.dx = dx;
  n.dy = dy;
  for (int i = 0; i < 4; ++i)
    n.distances[i] = offset_length(n.offsets[i].dx, n.offsets[i].dy, dx, dy);
  return n;
}

Neighborhood Neighborhood::make(int connectivity, double dx, double dy) {
  switch (connectivity) {
    case 4:
      return d4(dx, dy);
    case 8:
      return d8(dx, dy);
    case 6:
      throw ConfigError("hexagonal (6-connected) grids are not implemented");
    default:
      throw ConfigError("connectivity must be 4 or 8, got " +
                        std::to_string(connectivity));
  }
}

}  // namespace lem
