#pragma once

#include <utility>
#include <vector>

#include "lem/neighborhood.hpp"
#include "lem/raster.hpp"

namespace lem {

/// Adjacency view over a regular grid: enumerates each cell's in-bounds
/// neighbours in the Neighborhood's fixed offset order. Flow-graph
/// construction is written against this shape so that explicit graphs
/// (irregular node sets used in tests) can share the same code path; any
/// type with size(), max_degree(), is_boundary() and for_each_neighbor()
/// works.
class GridGraph {
 public:
  GridGraph(int width, int height, const Neighborhood& nbh)
      : width_(width), height_(height), nbh_(nbh) {}

  std::size_t size() const {
    return static_cast<std::size_t>(width_) * height_;
  }
  int width() const { return width_; }
  int height() const { return height_; }
  int max_degree() const { return nbh_.connectivity; }
  const Neighborhood& neighborhood() const { return nbh_; }

  /// Boundary cells are the raster perimeter: fixed base level, no flow out.
  bool is_boundary(CellIndex c) const {
    return is_perimeter(c, width_, height_);
  }

  /// Calls f(neighbour index, distance) for every in-bounds neighbour of c,
  /// in fixed offset order. Off-grid offsets are skipped.
  template <typename F>
  void for_each_neighbor(CellIndex c, F&& f) const {
    const int x = static_cast<int>(c % width_);
    const int y = static_cast<int>(c / width_);
    for (int i = 0; i < nbh_.connectivity; ++i) {
      const int nx = x + nbh_.offsets[i].dx;
      const int ny = y + nbh_.offsets[i].dy;
      if (nx < 0 || nx >= width_ || ny < 0 || ny >= height_) continue;
      f(static_cast<CellIndex>(ny) * width_ + nx, nbh_.distances[i]);
    }
  }

  /// Geometric distance between two adjacent cells. Agrees bit-for-bit with
  /// the distances reported by for_each_neighbor (same offset_length call):
  /// erosion divides by dist(c, rec[c]) and every execution strategy has to
  /// see the same value.
  double distance_between(CellIndex a, CellIndex b) const {
    const int dx = static_cast<int>(b % width_) - static_cast<int>(a % width_);
    const int dy = static_cast<int>(b / width_) - static_cast<int>(a / width_);
    return offset_length(dx, dy, nbh_.dx, nbh_.dy);
  }

 private:
  int width_;
  int height_;
  Neighborhood nbh_;
};

/// Materialized neighbour list of one cell: (index, distance) pairs in
/// stencil order.
std::vector<std::pair<CellIndex, double>> neighbors(CellIndex c, int width,
                                                    int height,
                                                    const Neighborhood& nbh);

}  // namespace lem
